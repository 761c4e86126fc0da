//! Generalized Cartan matrices: validation, parsing, components, type
//! classification of subsets and orthogonal complements.
//!
//! Convention: `a_ij = ⟨α_j, α_i^∨⟩`, so the simple reflection `s_i` changes
//! only coordinate `i` of a vector `c`, by `c_i ↦ c_i - Σ_j a_ij c_j`.

mod diagram;

use std::fmt;

use serde::Serialize;

pub use diagram::{affine_catalogue, finite_catalogue, CoxeterDiagram, M_INF};

use crate::error::{Error, Result};
use crate::nodeset::{NodeSet, MAX_RANK};
use crate::vector::RootVector;

/// Finite, affine or indefinite type of a connected subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TypeClass {
    Finite,
    Affine,
    Indefinite,
}

/// Which notion of type is meant.
///
/// The two notions differ only on rank-2 components with `a_12 a_21 > 4`,
/// which are indefinite as GCMs but affine (`m = ∞`) as Coxeter systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    Gcm,
    Coxeter,
}

/// Type of one connected component of a subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentType {
    pub nodes: NodeSet,
    pub class: TypeClass,
    /// Catalogue name such as `"B3"` or `"A2~"`, when the component is of
    /// finite or affine Coxeter type.
    pub label: Option<String>,
}

/// A validated generalized Cartan matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Gcm {
    rank: usize,
    a: Vec<i64>,
    labels: Vec<String>,
    components: Vec<NodeSet>,
}

impl Gcm {
    /// Validates the GCM axioms on a square integer matrix.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let rank = rows.len();
        if rank == 0 {
            return Err(Error::AxiomViolation("rank must be positive".into()));
        }
        if rank > MAX_RANK {
            return Err(Error::AxiomViolation(format!(
                "rank {rank} exceeds the supported maximum {MAX_RANK}"
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != rank {
                return Err(Error::AxiomViolation(format!(
                    "row {} has {} entries, expected {rank}",
                    i + 1,
                    row.len()
                )));
            }
        }
        // a_ij and a_ji are read together, so index loops stay
        #[allow(clippy::needless_range_loop)]
        for i in 0..rank {
            if rows[i][i] != 2 {
                return Err(Error::AxiomViolation(format!(
                    "diagonal entry a_{0}{0} = {1}, expected 2",
                    i + 1,
                    rows[i][i]
                )));
            }
            for j in 0..rank {
                if i == j {
                    continue;
                }
                if rows[i][j] > 0 {
                    return Err(Error::AxiomViolation(format!(
                        "off-diagonal entry a_{}{} = {} is positive",
                        i + 1,
                        j + 1,
                        rows[i][j]
                    )));
                }
                if (rows[i][j] == 0) != (rows[j][i] == 0) {
                    return Err(Error::AxiomViolation(format!(
                        "a_{0}{1} = {2} but a_{1}{0} = {3}",
                        i + 1,
                        j + 1,
                        rows[i][j],
                        rows[j][i]
                    )));
                }
            }
        }
        let a: Vec<i64> = rows.into_iter().flatten().collect();
        let labels = (1..=rank).map(|i| i.to_string()).collect();
        let mut g = Gcm {
            rank,
            a,
            labels,
            components: Vec::new(),
        };
        g.components = g.components_of(NodeSet::full(rank));
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.rank {
            return Err(Error::AxiomViolation(format!(
                "{} labels given for rank {}",
                labels.len(),
                self.rank
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Parses the text format: a `rank n` line, `n` rows of integers, and an
    /// optional `labels ...` line. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rank: Option<usize> = None;
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut labels: Option<Vec<String>> = None;
        let mut last_line = 0;
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let malformed = |reason: String| Error::MalformedInput {
                line: line_no,
                reason,
            };
            let mut tokens = line.split_whitespace();
            let first = tokens.next().unwrap_or("");
            match rank {
                None => {
                    if first != "rank" {
                        return Err(malformed(format!("expected `rank n`, found `{line}`")));
                    }
                    let n = tokens
                        .next()
                        .ok_or_else(|| malformed("missing rank value".into()))?
                        .parse::<usize>()
                        .map_err(|e| malformed(format!("bad rank: {e}")))?;
                    if tokens.next().is_some() {
                        return Err(malformed("trailing tokens after rank".into()));
                    }
                    rank = Some(n);
                }
                Some(n) if first == "labels" => {
                    if rows.len() != n {
                        return Err(malformed(format!(
                            "labels before all {n} matrix rows were given"
                        )));
                    }
                    if labels.is_some() {
                        return Err(malformed("duplicate labels line".into()));
                    }
                    labels = Some(tokens.map(str::to_string).collect());
                }
                Some(n) => {
                    if rows.len() == n {
                        return Err(malformed(format!("more than {n} matrix rows")));
                    }
                    let row = line
                        .split_whitespace()
                        .map(|t| {
                            t.parse::<i64>()
                                .map_err(|e| malformed(format!("bad entry `{t}`: {e}")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if row.len() != n {
                        return Err(malformed(format!(
                            "row has {} entries, expected {n}",
                            row.len()
                        )));
                    }
                    rows.push(row);
                }
            }
        }
        let n = rank.ok_or(Error::MalformedInput {
            line: last_line.max(1),
            reason: "missing `rank n` line".into(),
        })?;
        if rows.len() != n {
            return Err(Error::MalformedInput {
                line: last_line.max(1),
                reason: format!("expected {n} matrix rows, found {}", rows.len()),
            });
        }
        let g = Gcm::from_rows(rows)?;
        match labels {
            Some(l) => g.with_labels(l),
            None => Ok(g),
        }
    }

    /// Canonical text serialization; `parse(to_text())` reproduces `self`.
    pub fn to_text(&self) -> String {
        let mut s = format!("rank {}\n", self.rank);
        for i in 0..self.rank {
            let row: Vec<String> = (0..self.rank).map(|j| self.a(i, j).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        let default: Vec<String> = (1..=self.rank).map(|i| i.to_string()).collect();
        if self.labels != default {
            s.push_str("labels ");
            s.push_str(&self.labels.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.rank + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.a.chunks(self.rank).map(<[i64]>::to_vec).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn all(&self) -> NodeSet {
        NodeSet::full(self.rank)
    }

    /// Connected components of the whole index set.
    pub fn components(&self) -> &[NodeSet] {
        &self.components
    }

    /// Validates a zero-based generator index.
    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.rank {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i + 1,
                rank: self.rank,
            })
        }
    }

    pub fn neighbours(&self, i: usize) -> NodeSet {
        (0..self.rank)
            .filter(|&j| j != i && self.a(i, j) != 0)
            .collect()
    }

    /// Connected components of the Dynkin graph restricted to `j`, ordered
    /// by their smallest element.
    pub fn components_of(&self, j: NodeSet) -> Vec<NodeSet> {
        let mut left = j;
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = NodeSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = NodeSet::EMPTY;
                for i in frontier.iter() {
                    next = next.union(self.neighbours(i).intersection(j));
                }
                frontier = next.difference(comp);
                comp = comp.union(frontier);
            }
            left = left.difference(comp);
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self, j: NodeSet) -> bool {
        !j.is_empty() && self.components_of(j).len() == 1
    }

    /// The component of `I` containing node `i`.
    pub fn component_containing(&self, i: usize) -> NodeSet {
        *self
            .components
            .iter()
            .find(|c| c.contains(i))
            .expect("components cover I")
    }

    /// `J⊥ = { i ∉ J : a_ij = 0 for all j ∈ J }`.
    pub fn orthogonal_complement(&self, j: NodeSet) -> NodeSet {
        self.all()
            .difference(j)
            .iter()
            .filter(|&i| j.iter().all(|k| self.a(i, k) == 0))
            .collect()
    }

    /// `⟨v, α_i^∨⟩ = Σ_j a_ij v_j`.
    pub fn pairing(&self, v: &[i64], i: usize) -> i128 {
        let row = &self.a[i * self.rank..(i + 1) * self.rank];
        row.iter()
            .zip(v)
            .map(|(&a, &c)| a as i128 * c as i128)
            .sum()
    }

    /// Applies `s_i` to `v` in place.
    pub fn reflect_in_place(&self, v: &mut [i64], i: usize) -> Result<()> {
        let p = self.pairing(v, i);
        let c = v[i] as i128 - p;
        v[i] = i64::try_from(c).map_err(|_| Error::Overflow("simple reflection"))?;
        Ok(())
    }

    pub fn reflect(&self, v: &RootVector, i: usize) -> Result<RootVector> {
        let mut out = v.clone();
        self.reflect_in_place(out.coords_mut(), i)?;
        Ok(out)
    }

    /// Determinant of the principal submatrix on `k`, with `det(∅) = 1`.
    pub fn principal_minor(&self, k: NodeSet) -> i128 {
        let idx: Vec<usize> = k.iter().collect();
        let m: Vec<Vec<i128>> = idx
            .iter()
            .map(|&r| idx.iter().map(|&c| self.a(r, c) as i128).collect())
            .collect();
        bareiss_determinant(m)
    }

    /// Type of a connected subset `j` in the GCM sense, via principal minors.
    pub fn gcm_class(&self, j: NodeSet) -> TypeClass {
        debug_assert!(self.is_connected(j));
        let mut proper_positive = true;
        for k in j.subsets() {
            if k.is_empty() || k == j {
                continue;
            }
            if self.principal_minor(k) <= 0 {
                proper_positive = false;
                break;
            }
        }
        let det = self.principal_minor(j);
        match (proper_positive, det.signum()) {
            (true, 1) => TypeClass::Finite,
            (true, 0) => TypeClass::Affine,
            _ => TypeClass::Indefinite,
        }
    }

    /// Coxeter matrix entry `m_ij` derived from `a_ij a_ji`.
    pub fn coxeter_m(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 1;
        }
        match self.a(i, j) * self.a(j, i) {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            _ => M_INF,
        }
    }

    pub fn coxeter_diagram(&self) -> CoxeterDiagram {
        let n = self.rank;
        let m = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| self.coxeter_m(i, j))
            .collect();
        CoxeterDiagram::from_matrix(n, m)
    }

    /// Catalogue match of a connected subset's Coxeter diagram.
    fn coxeter_label(&self, j: NodeSet) -> (TypeClass, Option<String>) {
        let d = self.coxeter_diagram().restrict(j);
        let k = j.len();
        if let Some((name, _)) = finite_catalogue(k)
            .into_iter()
            .find(|(_, c)| c.is_isomorphic(&d))
        {
            return (TypeClass::Finite, Some(name));
        }
        if let Some((name, _)) = affine_catalogue(k)
            .into_iter()
            .find(|(_, c)| c.is_isomorphic(&d))
        {
            return (TypeClass::Affine, Some(name));
        }
        (TypeClass::Indefinite, None)
    }

    /// Types of the connected components of `j`.
    pub fn classify(&self, j: NodeSet, sense: Sense) -> Vec<ComponentType> {
        self.components_of(j)
            .into_iter()
            .map(|c| {
                let (cox, label) = self.coxeter_label(c);
                let class = match sense {
                    Sense::Coxeter => cox,
                    Sense::Gcm => self.gcm_class(c),
                };
                let label = if class == cox { label } else { None };
                ComponentType {
                    nodes: c,
                    class,
                    label,
                }
            })
            .collect()
    }

    /// Union of the components of `j` of the given class.
    pub fn part_of_class(&self, j: NodeSet, class: TypeClass, sense: Sense) -> NodeSet {
        self.classify(j, sense)
            .into_iter()
            .filter(|c| c.class == class)
            .fold(NodeSet::EMPTY, |acc, c| acc.union(c.nodes))
    }

    /// `J_aff`: union of the affine components of `j`.
    pub fn affine_part(&self, j: NodeSet, sense: Sense) -> NodeSet {
        self.part_of_class(j, TypeClass::Affine, sense)
    }

    /// True when every component of `j` is of finite type.
    pub fn is_spherical(&self, j: NodeSet) -> bool {
        self.classify(j, Sense::Gcm)
            .iter()
            .all(|c| c.class == TypeClass::Finite)
    }

    /// Sub-GCM on the nodes of `j`, relabelled in increasing order.
    pub fn restrict(&self, j: NodeSet) -> Gcm {
        let idx: Vec<usize> = j.iter().collect();
        let rows = idx
            .iter()
            .map(|&r| idx.iter().map(|&c| self.a(r, c)).collect())
            .collect();
        let g = Gcm::from_rows(rows).expect("principal submatrix of a GCM is a GCM");
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        g.with_labels(labels).expect("label count matches")
    }
}

impl fmt::Debug for Gcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gcm{:?}", self.rows())
    }
}

/// Fraction-free Gaussian elimination; exact for integer matrices.
fn bareiss_determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&r| m[r][k] != 0) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}
