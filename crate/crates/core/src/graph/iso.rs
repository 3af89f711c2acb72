use rayon::prelude::*;
use serde::Serialize;

use super::Graph;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsomorphismCheck {
    pub is_isomorphism: bool,
    /// First pair `(u, v)` of `g` whose adjacency is not preserved.
    pub first_violation: Option<(usize, usize)>,
}

/// Verifies that `map` (vertex `i` of `g` goes to `map[i]` of `h`) preserves both
/// adjacency and non-adjacency.
pub fn check_isomorphism<A: Sync, B: Sync>(g: &Graph<A>, h: &Graph<B>, map: &[usize]) -> Result<IsomorphismCheck> {
    let n = g.n();
    if h.n() != n || map.len() != n {
        return Err(Error::param(format!(
            "map of length {} between graphs of order {} and {}",
            map.len(),
            n,
            h.n()
        )));
    }
    let mut hit = vec![false; n];
    for (i, &m) in map.iter().enumerate() {
        if m >= n || std::mem::replace(&mut hit[m], true) {
            return Err(Error::param(format!("map is not a bijection (vertex {i} -> {m})")));
        }
    }
    let first = (0..n)
        .into_par_iter()
        .map(|u| ((u + 1)..n).find(|&v| g.adjacent(u, v) != h.adjacent(map[u], map[v])).map(|v| (u, v)))
        .find_first(|x| x.is_some())
        .flatten();
    Ok(IsomorphismCheck { is_isomorphism: first.is_none(), first_violation: first })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn identity_and_relabelling() {
        let c5 = build_graph((0..5).collect(), |&a: &usize, &b: &usize| (a + 1) % 5 == b || (b + 1) % 5 == a).unwrap();
        let id: Vec<usize> = (0..5).collect();
        assert!(check_isomorphism(&c5, &c5, &id).unwrap().is_isomorphism);
        // i -> 2i mod 5 sends C5 to the pentagram, not to C5
        let double: Vec<usize> = (0..5).map(|i| 2 * i % 5).collect();
        let r = check_isomorphism(&c5, &c5, &double).unwrap();
        assert!(!r.is_isomorphism);
        assert_eq!(r.first_violation, Some((0, 1)));
        let pentagram = build_graph((0..5).collect(), |&a: &usize, &b: &usize| (a + 2) % 5 == b || (b + 2) % 5 == a).unwrap();
        assert!(check_isomorphism(&c5, &pentagram, &double).unwrap().is_isomorphism);
    }

    #[test]
    fn k3_to_p3_never_isomorphic() {
        let k3 = build_graph(vec![0, 1, 2], |_: &i32, _: &i32| true).unwrap();
        let p3 = build_graph(vec![0, 1, 2], |&a: &i32, &b: &i32| (a - b).abs() == 1).unwrap();
        for map in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            assert!(!check_isomorphism(&k3, &p3, &map).unwrap().is_isomorphism);
        }
    }

    #[test]
    fn non_bijective_map_rejected() {
        let k3 = build_graph(vec![0, 1, 2], |_: &i32, _: &i32| true).unwrap();
        assert!(check_isomorphism(&k3, &k3, &[0, 0, 1]).is_err());
        assert!(check_isomorphism(&k3, &k3, &[0, 1]).is_err());
        assert!(check_isomorphism(&k3, &k3, &[0, 1, 3]).is_err());
    }
}
