//! Coxeter diagrams and the catalogue of connected finite and affine types.

use crate::nodeset::NodeSet;

/// Edge label standing for `m = ∞`.
pub const M_INF: u32 = u32::MAX;

/// A Coxeter matrix on `n` nodes; `m[i][i] = 1`, `2` means "no edge".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterDiagram {
    n: usize,
    m: Vec<u32>,
}

impl CoxeterDiagram {
    pub fn empty(n: usize) -> Self {
        let mut m = vec![2; n * n];
        for i in 0..n {
            m[i * n + i] = 1;
        }
        CoxeterDiagram { n, m }
    }

    pub fn from_matrix(n: usize, m: Vec<u32>) -> Self {
        assert_eq!(m.len(), n * n);
        CoxeterDiagram { n, m }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn m(&self, i: usize, j: usize) -> u32 {
        self.m[i * self.n + j]
    }

    pub fn set_edge(&mut self, i: usize, j: usize, label: u32) {
        self.m[i * self.n + j] = label;
        self.m[j * self.n + i] = label;
    }

    /// Sub-diagram on the nodes of `nodes`, relabelled in increasing order.
    pub fn restrict(&self, nodes: NodeSet) -> Self {
        let idx: Vec<usize> = nodes.iter().collect();
        let k = idx.len();
        let mut m = Vec::with_capacity(k * k);
        for &a in &idx {
            for &b in &idx {
                m.push(self.m(a, b));
            }
        }
        CoxeterDiagram { n: k, m }
    }

    fn neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| j != i && self.m(i, j) != 2)
    }

    /// Sorted multiset of incident edge labels, an isomorphism invariant.
    fn signature(&self, i: usize) -> Vec<u32> {
        let mut s: Vec<u32> = self.neighbours(i).map(|j| self.m(i, j)).collect();
        s.sort_unstable();
        s
    }

    /// Labeled-graph isomorphism by backtracking over signature classes.
    pub fn is_isomorphic(&self, other: &CoxeterDiagram) -> bool {
        if self.n != other.n {
            return false;
        }
        let sa: Vec<Vec<u32>> = (0..self.n).map(|i| self.signature(i)).collect();
        let sb: Vec<Vec<u32>> = (0..other.n).map(|i| other.signature(i)).collect();
        let mut ka = sa.clone();
        let mut kb = sb.clone();
        ka.sort();
        kb.sort();
        if ka != kb {
            return false;
        }
        let mut map = vec![usize::MAX; self.n];
        let mut used = vec![false; other.n];
        self.extend_iso(other, &sa, &sb, 0, &mut map, &mut used)
    }

    fn extend_iso(
        &self,
        other: &CoxeterDiagram,
        sa: &[Vec<u32>],
        sb: &[Vec<u32>],
        i: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == self.n {
            return true;
        }
        for j in 0..other.n {
            if used[j] || sa[i] != sb[j] {
                continue;
            }
            if (0..i).any(|k| self.m(i, k) != other.m(j, map[k])) {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if self.extend_iso(other, sa, sb, i + 1, map, used) {
                return true;
            }
            used[j] = false;
        }
        map[i] = usize::MAX;
        false
    }
}

/// Path on `labels.len() + 1` nodes with the given edge labels.
fn chain(labels: &[u32]) -> CoxeterDiagram {
    let mut d = CoxeterDiagram::empty(labels.len() + 1);
    for (k, &l) in labels.iter().enumerate() {
        d.set_edge(k, k + 1, l);
    }
    d
}

/// Star with a centre and three simply-laced arms of lengths `p, q, r`.
fn tee(p: usize, q: usize, r: usize) -> CoxeterDiagram {
    let mut d = CoxeterDiagram::empty(1 + p + q + r);
    let mut next = 1;
    for arm in [p, q, r] {
        let mut prev = 0;
        for _ in 0..arm {
            d.set_edge(prev, next, 3);
            prev = next;
            next += 1;
        }
    }
    d
}

/// Connected finite Coxeter diagrams with `k` nodes reachable from
/// crystallographic labels `{3, 4, 6}`.
pub fn finite_catalogue(k: usize) -> Vec<(String, CoxeterDiagram)> {
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    out.push((format!("A{k}"), chain(&vec![3; k - 1])));
    if k >= 2 {
        let mut labels = vec![3; k - 1];
        labels[k - 2] = 4;
        out.push((format!("B{k}"), chain(&labels)));
    }
    if k >= 4 {
        out.push((format!("D{k}"), tee(1, 1, k - 3)));
    }
    if (6..=8).contains(&k) {
        out.push((format!("E{k}"), tee(1, 2, k - 4)));
    }
    if k == 4 {
        out.push(("F4".into(), chain(&[3, 4, 3])));
    }
    if k == 2 {
        out.push(("G2".into(), chain(&[6])));
    }
    out
}

/// Connected affine Coxeter diagrams with `k` nodes.
pub fn affine_catalogue(k: usize) -> Vec<(String, CoxeterDiagram)> {
    let mut out = Vec::new();
    if k < 2 {
        return out;
    }
    let n = k - 1;
    if k == 2 {
        out.push(("A1~".into(), chain(&[M_INF])));
    } else {
        let mut d = chain(&vec![3; k - 1]);
        d.set_edge(k - 1, 0, 3);
        out.push((format!("A{n}~"), d));
    }
    if n >= 3 {
        // leaves 0, 1 on node 2; chain 2..k-1 ending in a 4
        let mut d = CoxeterDiagram::empty(k);
        d.set_edge(0, 2, 3);
        d.set_edge(1, 2, 3);
        for c in 2..k - 1 {
            d.set_edge(c, c + 1, if c + 1 == k - 1 { 4 } else { 3 });
        }
        out.push((format!("B{n}~"), d));
    }
    if n >= 2 {
        let mut labels = vec![3; k - 1];
        labels[0] = 4;
        labels[k - 2] = 4;
        out.push((format!("C{n}~"), chain(&labels)));
    }
    if n >= 4 {
        // chain 4..k-1 of n-3 nodes, two leaves at each end
        let mut d = CoxeterDiagram::empty(k);
        let first = 4;
        let last = k - 1;
        for c in first..last {
            d.set_edge(c, c + 1, 3);
        }
        d.set_edge(0, first, 3);
        d.set_edge(1, first, 3);
        d.set_edge(2, last, 3);
        d.set_edge(3, last, 3);
        out.push((format!("D{n}~"), d));
    }
    match k {
        3 => out.push(("G2~".into(), chain(&[3, 6]))),
        5 => out.push(("F4~".into(), chain(&[3, 3, 4, 3]))),
        7 => out.push(("E6~".into(), tee(2, 2, 2))),
        8 => out.push(("E7~".into(), tee(1, 3, 3))),
        9 => out.push(("E8~".into(), tee(1, 2, 5))),
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_sizes_are_consistent() {
        for k in 1..=10 {
            for (name, d) in finite_catalogue(k) {
                assert_eq!(d.len(), k, "{name}");
            }
            for (name, d) in affine_catalogue(k) {
                assert_eq!(d.len(), k, "{name}");
            }
        }
    }

    #[test]
    fn isomorphism_ignores_node_order() {
        let mut a = CoxeterDiagram::empty(4);
        a.set_edge(0, 1, 3);
        a.set_edge(1, 2, 3);
        a.set_edge(2, 3, 4);
        let mut b = CoxeterDiagram::empty(4);
        b.set_edge(3, 0, 3);
        b.set_edge(0, 2, 3);
        b.set_edge(2, 1, 4);
        assert!(a.is_isomorphic(&b));
        let mut c = b.clone();
        c.set_edge(2, 1, 6);
        assert!(!a.is_isomorphic(&c));
    }

    #[test]
    fn d4_tilde_is_a_star() {
        let d = &affine_catalogue(5)
            .into_iter()
            .find(|(n, _)| n == "D4~")
            .unwrap()
            .1;
        let centre = (0..5).find(|&i| d.neighbours(i).count() == 4);
        assert!(centre.is_some());
    }
}
