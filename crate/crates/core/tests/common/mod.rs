//! Oracles and generators shared by the integration tests. Nothing here calls the
//! library code it is used to check.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;

use gmswitch::graph::{build_graph, Graph, SwitchingPartition};

/// `[n, k]_q` from the product formula in u128.
pub fn gaussian(n: u32, k: u32, q: u128) -> u128 {
    if k > n {
        return 0;
    }
    let num: u128 = (0..k).map(|i| q.pow(n - i) - 1).product();
    let den: u128 = (0..k).map(|i| q.pow(i + 1) - 1).product();
    num / den
}

/// `(q^k - 1)/(q - 1)`.
pub fn points(k: u32, q: u128) -> u128 {
    (q.pow(k) - 1) / (q - 1)
}

/// Valency `q [k]_q [n-k]_q` of `J_q(n, k)`.
pub fn grassmann_valency(n: u32, k: u32, q: u128) -> u128 {
    q * points(k, q) * points(n - k, q)
}

/// A random graph together with a partition that satisfies the switching
/// hypothesis by construction.
///
/// All cells have the same even size `s`. Inside a cell and between two cells the
/// adjacency is circulant (`a ~ b` iff `(b - a) mod s` or `(a + b) mod s` lies in a
/// fixed set), which makes every vertex of a cell see the same number of
/// neighbours in every cell. Each exempt vertex picks none, exactly half, or all of
/// each cell.
pub fn random_gm_instance(rng: &mut impl Rng) -> (Graph<usize>, SwitchingPartition) {
    let t = rng.random_range(1..=3usize);
    let s = 2 * rng.random_range(1..=3usize);
    let d = rng.random_range(1..=4usize);
    let n = t * s + d;
    let cell = |v: usize| v / s;
    let pos = |v: usize| v % s;

    // Symmetric difference sets inside each cell, arbitrary sum sets between cells.
    let within: Vec<Vec<bool>> = (0..t)
        .map(|_| {
            let mut set = vec![false; s];
            for k in 1..=s / 2 {
                let on = rng.random_bool(0.5);
                set[k] = on;
                set[s - k] = on;
            }
            set
        })
        .collect();
    let between: Vec<Vec<Vec<bool>>> =
        (0..t).map(|_| (0..t).map(|_| (0..s).map(|_| rng.random_bool(0.5)).collect()).collect()).collect();

    let mut exempt_nbrs: Vec<Vec<bool>> = vec![vec![false; t * s]; d];
    for row in exempt_nbrs.iter_mut() {
        for c in 0..t {
            let members: Vec<usize> = (c * s..(c + 1) * s).collect();
            let chosen: Vec<usize> = match rng.random_range(0..3) {
                0 => vec![],
                1 => {
                    let mut m = members.clone();
                    m.shuffle(rng);
                    m.truncate(s / 2);
                    m
                }
                _ => members,
            };
            for v in chosen {
                row[v] = true;
            }
        }
    }
    let dd: Vec<bool> = (0..d * d).map(|_| rng.random_bool(0.5)).collect();

    let g = build_graph((0..n).collect(), |&a: &usize, &b: &usize| {
        let (a, b) = (a.min(b), a.max(b));
        let split = t * s;
        match (a < split, b < split) {
            (true, true) => {
                let (ca, cb) = (cell(a), cell(b));
                if ca == cb {
                    within[ca][(pos(b) + s - pos(a)) % s]
                } else {
                    between[ca.min(cb)][ca.max(cb)][(pos(a) + pos(b)) % s]
                }
            }
            (true, false) => exempt_nbrs[b - split][a],
            (false, true) => unreachable!(),
            (false, false) => {
                let (i, j) = (a - split, b - split);
                dd[i.min(j) * d + i.max(j)]
            }
        }
    })
    .unwrap();
    let cells = (0..t).map(|c| (c * s..(c + 1) * s).collect()).collect();
    let exempt = (t * s..n).collect();
    (g, SwitchingPartition::new(cells, exempt))
}
