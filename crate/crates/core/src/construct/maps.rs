use super::partition::sigma_table;
use super::{Block, Design, Geometry};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::subspace::{Polarity, Subspace};

fn phi_block(geom: &Geometry, table: &[usize], w: usize) -> Block {
    let Some(u) = geom.vertex_u[w] else {
        return geom.points.indices(&geom.blocks[w]);
    };
    let own = &geom.e_space_bits[u];
    let mut block: Block = geom.points.indices(&geom.e_spaces[table[u]]);
    block.extend(geom.block_bits[w].iter().filter(|&p| !own.contains(p)).map(|p| p as u32));
    block.sort_unstable();
    block
}

/// `φ(W)` for every vertex of the Grassmann graph, in vertex order.
pub fn phi_blocks(geom: &Geometry, sigma: &Polarity) -> Result<Vec<Block>> {
    let table = sigma_table(geom, sigma)?;
    Ok((0..geom.blocks.len()).map(|w| phi_block(geom, &table, w)).collect())
}

fn locate(design: &Design, images: Vec<Block>, what: &str) -> Result<Vec<usize>> {
    if images.len() != design.blocks().len() {
        return Err(Error::Consistency(format!(
            "{what} has {} images for {} blocks",
            images.len(),
            design.blocks().len()
        )));
    }
    let mut hit = vec![false; images.len()];
    images
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let j = design
                .index_of(b)
                .ok_or_else(|| Error::Consistency(format!("{what}({i}) = {b:?} is not a block")))?;
            if std::mem::replace(&mut hit[j], true) {
                return Err(Error::Consistency(format!("{what} collides on block {j}")));
            }
            Ok(j)
        })
        .collect()
}

/// Grassmann vertex index to block index of `jt`.
pub fn phi_map(geom: &Geometry, sigma: &Polarity, jt: &Design) -> Result<Vec<usize>> {
    locate(jt, phi_blocks(geom, sigma)?, "φ")
}

/// Twisted-graph vertex index to block index of `jt`: `φ` on 𝒜, `B ↦ [σ(B)]` on ℬ.
pub fn psi_map(geom: &Geometry, sigma: &Polarity, twisted: &Graph<Subspace>, jt: &Design) -> Result<Vec<usize>> {
    geom.params.require_certifiable()?;
    let table = sigma_table(geom, sigma)?;
    let e = geom.params.e;
    let images = twisted
        .labels()
        .iter()
        .map(|x| {
            if x.dim() == e + 1 {
                let w = geom
                    .blocks
                    .binary_search(x)
                    .map_err(|_| Error::param(format!("{x:?} is not an (e+1)-subspace of V")))?;
                if geom.in_h[w] {
                    return Err(Error::param(format!("{x:?} lies in H, so it is not a twisted vertex")));
                }
                Ok(phi_block(geom, &table, w))
            } else {
                Ok(geom.points.indices(&sigma.apply(x)?))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    locate(jt, images, "ψ")
}
