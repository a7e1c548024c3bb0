//! Fat graphs as rotation systems: darts, a vertex rotation `sigma` and an
//! edge involution `alpha`. Boundary walks are the cycles of `sigma . alpha`.
//! Gluing a disk into every boundary walk gives a closed surface, on which a
//! graph automorphism induces a cyclic action.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{gcd, lcm_all};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FatGraphError {
    #[error("inconsistent rotation: {0}")]
    InconsistentRotation(String),
    #[error("half-edge {0} is not paired by exactly one edge")]
    DanglingHalfEdge(i64),
    #[error("the graph is not connected")]
    Disconnected,
    #[error("malformed boundary word: {0}")]
    BadWord(String),
    #[error("permutation does not commute with the rotation system")]
    NotAnAutomorphism,
    #[error("vertex {vertex} has degree {degree}, a filling graph is 4-regular")]
    NotFourRegular { vertex: usize, degree: usize },
    #[error("non-integral quotient genus {0}")]
    NonIntegralQuotient(String),
    #[error("the automorphism is trivial")]
    TrivialAutomorphism,
}

/// Serialized form: each vertex lists its half-edges in rotation order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FatGraphSpec {
    pub vertices: Vec<Vec<i64>>,
    pub edges: Vec<(i64, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FatGraphSpec", into = "FatGraphSpec")]
pub struct FatGraph {
    sigma: Vec<usize>,
    alpha: Vec<usize>,
    /// Letter and sign for every dart, used when printing boundary words.
    letters: Vec<(String, bool)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FatGraphAut {
    pub perm: Vec<usize>,
    pub order: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    Vertex,
    Edge,
    Face,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeCell {
    pub kind: CellKind,
    /// Size of the orbit of the cell.
    pub orbit_size: i64,
    /// Stabilizer order, the cone order in the quotient.
    pub order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedSignature {
    pub order: i64,
    pub quotient_genus: i64,
    pub cone_orders: Vec<i64>,
    pub cone_cells: Vec<ConeCell>,
}

impl InducedSignature {
    /// Gilman: quotient sphere with three cone points.
    pub fn is_irreducible(&self) -> bool {
        self.quotient_genus == 0 && self.cone_orders.len() == 3
    }
}

/// Whether `required` vertices can be made of orbits of the given sizes
/// (each cone point used at most once) plus free orbits of size `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexOrbitCertificate {
    pub genus: i64,
    pub order: i64,
    pub boundary_components: i64,
    pub required_vertices: i64,
    pub cone_orders: Vec<i64>,
    /// Every sum over a non-empty set of cone orbits, e.g. `12/6+12/12=3`.
    pub orbit_sums: Vec<String>,
    /// Sums using the cone points other than one of full order `n` (the
    /// center of the boundary disk when `b = 1`).
    pub vertex_candidate_sums: Vec<String>,
    pub feasible: bool,
}

pub fn vertex_orbit_certificate(g: i64, n: i64, b: i64, cone_orders: &[i64]) -> VertexOrbitCertificate {
    let required = 2 * g - 2 + b;
    let sizes: Vec<i64> = cone_orders.iter().map(|&m| n / m).collect();
    let render = |subset: &[usize]| {
        let terms: Vec<String> = subset.iter().map(|&i| format!("{n}/{}", cone_orders[i])).collect();
        let total: i64 = subset.iter().map(|&i| sizes[i]).sum();
        (format!("{}={total}", terms.join("+")), total)
    };
    let subsets = |skip: Option<usize>| -> Vec<(String, i64)> {
        let idx: Vec<usize> = (0..cone_orders.len()).filter(|&i| Some(i) != skip).collect();
        (1u32..(1 << idx.len()))
            .map(|mask| {
                let chosen: Vec<usize> = idx
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, &i)| i)
                    .collect();
                render(&chosen)
            })
            .collect()
    };
    let all = subsets(None);
    let face = cone_orders.iter().position(|&m| m == n);
    let candidates = if face.is_some() { subsets(face) } else { Vec::new() };
    let reach = |t: i64| t <= required && (required - t) % n == 0;
    let feasible = reach(0) || all.iter().any(|(_, t)| reach(*t));
    VertexOrbitCertificate {
        genus: g,
        order: n,
        boundary_components: b,
        required_vertices: required,
        cone_orders: cone_orders.to_vec(),
        orbit_sums: all.into_iter().map(|(s, _)| s).collect(),
        vertex_candidate_sums: candidates.into_iter().map(|(s, _)| s).collect(),
        feasible,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FillingReport {
    pub genus: i64,
    pub boundary_components: i64,
    pub order: i64,
    pub signature: InducedSignature,
    /// Gilman's criterion on the induced signature.
    pub irreducible: bool,
    /// The theorem's prediction: irreducible iff `(g, n) = (1, 4)`.
    pub predicted_irreducible: bool,
    /// `n | 4(2g - 2 + b)`
    pub order_divides: bool,
    /// `2g + 1 <= n <= 4g + 2`, relevant for irreducible actions.
    pub order_bounds: bool,
    pub vertex_orbits: VertexOrbitCertificate,
}

impl FatGraph {
    /// Half-edge labels are arbitrary integers; each must occur in exactly one
    /// vertex rotation and in exactly one edge.
    pub fn build(vertices: &[Vec<i64>], edges: &[(i64, i64)]) -> Result<Self, FatGraphError> {
        let mut index: HashMap<i64, usize> = HashMap::new();
        let mut sigma = Vec::new();
        for rotation in vertices {
            if rotation.is_empty() {
                return Err(FatGraphError::InconsistentRotation("empty vertex".into()));
            }
            let base = sigma.len();
            for (i, &h) in rotation.iter().enumerate() {
                if index.insert(h, base + i).is_some() {
                    return Err(FatGraphError::InconsistentRotation(format!(
                        "half-edge {h} appears twice"
                    )));
                }
                sigma.push(base + (i + 1) % rotation.len());
            }
        }
        let d = sigma.len();
        let mut alpha = vec![usize::MAX; d];
        let mut letters = vec![(String::new(), true); d];
        for (e, &(a, b)) in edges.iter().enumerate() {
            let ia = *index.get(&a).ok_or(FatGraphError::DanglingHalfEdge(a))?;
            let ib = *index.get(&b).ok_or(FatGraphError::DanglingHalfEdge(b))?;
            if ia == ib || alpha[ia] != usize::MAX {
                return Err(FatGraphError::DanglingHalfEdge(a));
            }
            if alpha[ib] != usize::MAX {
                return Err(FatGraphError::DanglingHalfEdge(b));
            }
            alpha[ia] = ib;
            alpha[ib] = ia;
            letters[ia] = (format!("e{}", e + 1), true);
            letters[ib] = (format!("e{}", e + 1), false);
        }
        if let Some(p) = alpha.iter().position(|&a| a == usize::MAX) {
            let label = index.iter().find(|&(_, &i)| i == p).map(|(&h, _)| h).unwrap_or(0);
            return Err(FatGraphError::DanglingHalfEdge(label));
        }
        FatGraph { sigma, alpha, letters }.connected()
    }

    /// The graph whose single boundary walk reads `word`, e.g. `"a b a^-1 b^-1"`.
    /// Every letter occurs exactly twice, once with each exponent.
    pub fn from_boundary_word(word: &str) -> Result<Self, FatGraphError> {
        let tokens: Vec<(String, bool)> = word
            .split_whitespace()
            .map(|t| match t.strip_suffix("^-1").or_else(|| t.strip_suffix('\'')) {
                Some(base) => (base.to_string(), false),
                None => (t.to_string(), true),
            })
            .collect();
        let len = tokens.len();
        if len == 0 {
            return Err(FatGraphError::BadWord("empty word".into()));
        }
        let mut seen: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (p, (name, _)) in tokens.iter().enumerate() {
            seen.entry(name.as_str()).or_default().push(p);
        }
        let mut alpha = vec![0; len];
        for (name, pos) in &seen {
            let [a, b] = pos[..] else {
                return Err(FatGraphError::BadWord(format!("{name} occurs {} times", pos.len())));
            };
            if tokens[a].1 == tokens[b].1 {
                return Err(FatGraphError::BadWord(format!(
                    "{name} occurs twice with the same exponent"
                )));
            }
            alpha[a] = b;
            alpha[b] = a;
        }
        // sigma . alpha must advance along the word
        let sigma = (0..len).map(|p| (alpha[p] + 1) % len).collect();
        FatGraph {
            sigma,
            alpha,
            letters: tokens,
        }
        .connected()
    }

    fn connected(self) -> Result<Self, FatGraphError> {
        let d = self.darts();
        let mut seen = vec![false; d];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for y in [self.sigma[x], self.alpha[x]] {
                if !seen[y] {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        if seen.iter().all(|&s| s) {
            Ok(self)
        } else {
            Err(FatGraphError::Disconnected)
        }
    }

    pub fn darts(&self) -> usize {
        self.sigma.len()
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    fn phi(&self, x: usize) -> usize {
        self.sigma[self.alpha[x]]
    }

    fn cycles(&self, step: impl Fn(usize) -> usize) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.darts()];
        let mut out = Vec::new();
        for start in 0..self.darts() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = step(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn vertices(&self) -> Vec<Vec<usize>> {
        self.cycles(|x| self.sigma[x])
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.darts())
            .filter(|&x| x < self.alpha[x])
            .map(|x| (x, self.alpha[x]))
            .collect()
    }

    /// Boundary walks as dart cycles.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        self.cycles(|x| self.phi(x))
    }

    pub fn vertex_count(&self) -> i64 {
        self.vertices().len() as i64
    }

    pub fn edge_count(&self) -> i64 {
        self.darts() as i64 / 2
    }

    pub fn boundary_count(&self) -> i64 {
        self.faces().len() as i64
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.vertices().iter().map(Vec::len).collect()
    }

    /// From `V - E + b = 2 - 2g`.
    pub fn genus(&self) -> i64 {
        (2 - self.vertex_count() + self.edge_count() - self.boundary_count()) / 2
    }

    /// Boundary walks as words, each rotated to its lexicographically least form.
    pub fn boundary_walks(&self) -> Vec<String> {
        let mut words: Vec<String> = self
            .faces()
            .iter()
            .map(|face| {
                let tokens: Vec<String> = face
                    .iter()
                    .map(|&x| {
                        let (name, pos) = &self.letters[x];
                        if *pos {
                            name.clone()
                        } else {
                            format!("{name}^-1")
                        }
                    })
                    .collect();
                (0..tokens.len())
                    .map(|r| {
                        let mut t = tokens.clone();
                        t.rotate_left(r);
                        t.join(" ")
                    })
                    .min()
                    .unwrap_or_default()
            })
            .collect();
        words.sort();
        words
    }

    pub fn to_spec(&self) -> FatGraphSpec {
        let vertices: Vec<Vec<i64>> = self
            .vertices()
            .into_iter()
            .map(|v| v.into_iter().map(|x| x as i64).collect())
            .collect();
        let edges = self.edges().into_iter().map(|(a, b)| (a as i64, b as i64)).collect();
        FatGraphSpec { vertices, edges }
    }

    fn is_automorphism(&self, perm: &[usize]) -> bool {
        (0..self.darts())
            .all(|x| perm[self.sigma[x]] == self.sigma[perm[x]] && perm[self.alpha[x]] == self.alpha[perm[x]])
    }

    /// The map sending dart 0 to `target`, if one exists.
    fn extend(&self, target: usize) -> Option<Vec<usize>> {
        let d = self.darts();
        let mut perm = vec![usize::MAX; d];
        let mut used = vec![false; d];
        perm[0] = target;
        used[target] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            let y = perm[x];
            for (nx, ny) in [(self.sigma[x], self.sigma[y]), (self.alpha[x], self.alpha[y])] {
                if perm[nx] == usize::MAX {
                    if used[ny] {
                        return None;
                    }
                    perm[nx] = ny;
                    used[ny] = true;
                    queue.push_back(nx);
                } else if perm[nx] != ny {
                    return None;
                }
            }
        }
        self.is_automorphism(&perm).then_some(perm)
    }

    /// The orientation-preserving automorphism group, identity first.
    pub fn automorphisms(&self) -> Vec<FatGraphAut> {
        let mut out: Vec<FatGraphAut> = (0..self.darts())
            .filter_map(|t| self.extend(t))
            .map(|perm| {
                let order = perm_order(&perm);
                FatGraphAut { perm, order }
            })
            .collect();
        out.sort_by(|a, b| (a.order, &a.perm).cmp(&(b.order, &b.perm)));
        out
    }

    pub fn automorphism(&self, perm: Vec<usize>) -> Result<FatGraphAut, FatGraphError> {
        if perm.len() != self.darts() || !self.is_automorphism(&perm) {
            return Err(FatGraphError::NotAnAutomorphism);
        }
        let order = perm_order(&perm);
        Ok(FatGraphAut { perm, order })
    }

    /// Signature of the action of `<h>` on the closed surface.
    pub fn induced_signature(&self, h: &FatGraphAut) -> Result<InducedSignature, FatGraphError> {
        if !self.is_automorphism(&h.perm) {
            return Err(FatGraphError::NotAnAutomorphism);
        }
        let n = h.order as i64;
        if n < 2 {
            return Err(FatGraphError::TrivialAutomorphism);
        }
        let mut cone_cells = Vec::new();
        let vertices = self.vertices();
        let faces = self.faces();
        let edges: Vec<Vec<usize>> = self.edges().into_iter().map(|(a, b)| vec![a, b]).collect();
        for (kind, cells) in [
            (CellKind::Vertex, &vertices),
            (CellKind::Edge, &edges),
            (CellKind::Face, &faces),
        ] {
            let mut owner = vec![usize::MAX; self.darts()];
            for (i, c) in cells.iter().enumerate() {
                for &x in c {
                    owner[x] = i;
                }
            }
            let mut seen = vec![false; cells.len()];
            for start in 0..cells.len() {
                if seen[start] {
                    continue;
                }
                let mut size = 0;
                let mut c = start;
                while !seen[c] {
                    seen[c] = true;
                    size += 1;
                    c = owner[h.perm[cells[c][0]]];
                }
                if size < n {
                    cone_cells.push(ConeCell {
                        kind,
                        orbit_size: size,
                        order: n / size,
                    });
                }
            }
        }
        let chi = self.vertex_count() - self.edge_count() + self.boundary_count();
        // chi / n = 2 - 2 g0 - sum (1 - 1/m)
        let big = |v: i64| BigRational::from_integer(BigInt::from(v));
        let defect: BigRational = cone_cells
            .iter()
            .map(|c| BigRational::one() - BigRational::new(BigInt::one(), BigInt::from(c.order)))
            .fold(BigRational::zero(), |a, b| a + b);
        let two_g0 = big(2) - defect - BigRational::new(BigInt::from(chi), BigInt::from(n));
        let g0 = two_g0.clone() / big(2);
        if !g0.is_integer() || g0 < BigRational::zero() {
            return Err(FatGraphError::NonIntegralQuotient(g0.to_string()));
        }
        let mut cone_orders: Vec<i64> = cone_cells.iter().map(|c| c.order).collect();
        cone_orders.sort();
        Ok(InducedSignature {
            order: n,
            quotient_genus: g0.to_integer().to_i64().unwrap_or(-1),
            cone_orders,
            cone_cells,
        })
    }

    pub fn filling_irreducibility_check(&self, h: &FatGraphAut) -> Result<FillingReport, FatGraphError> {
        for (vertex, v) in self.vertices().iter().enumerate() {
            if v.len() != 4 {
                return Err(FatGraphError::NotFourRegular {
                    vertex,
                    degree: v.len(),
                });
            }
        }
        let signature = self.induced_signature(h)?;
        let (g, b, n) = (self.genus(), self.boundary_count(), signature.order);
        let irreducible = signature.is_irreducible();
        debug_assert!(!irreducible || lcm_all(signature.cone_orders.iter().copied()) == n);
        Ok(FillingReport {
            genus: g,
            boundary_components: b,
            order: n,
            irreducible,
            predicted_irreducible: (g, n) == (1, 4),
            order_divides: (4 * (2 * g - 2 + b)) % n == 0,
            order_bounds: (2 * g + 1..=4 * g + 2).contains(&n),
            vertex_orbits: vertex_orbit_certificate(g, n, b, &signature.cone_orders),
            signature,
        })
    }
}

impl TryFrom<FatGraphSpec> for FatGraph {
    type Error = FatGraphError;

    fn try_from(spec: FatGraphSpec) -> Result<Self, Self::Error> {
        FatGraph::build(&spec.vertices, &spec.edges)
    }
}

impl From<FatGraph> for FatGraphSpec {
    fn from(g: FatGraph) -> Self {
        g.to_spec()
    }
}

fn perm_order(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut order = 1i64;
    for start in 0..perm.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            order = order / gcd(order, len) * len;
        }
    }
    order as usize
}

/// The element generating the group, if the group is cyclic.
pub fn cyclic_generator(group: &[FatGraphAut]) -> Option<&FatGraphAut> {
    group.iter().find(|a| a.order == group.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
        b.iter().map(|&x| a[x]).collect()
    }

    #[test]
    fn minimal_filling_graphs() {
        for g in [fixtures::gamma1(), fixtures::gamma2()] {
            assert_eq!((g.vertex_count(), g.edge_count(), g.boundary_count()), (3, 6, 1));
            assert_eq!(g.genus(), 2);
            assert!(g.degrees().iter().all(|&d| d == 4));
        }
    }

    #[test]
    fn gamma1_walk_is_the_word() {
        let walks = fixtures::gamma1().boundary_walks();
        assert_eq!(walks.len(), 1);
        let mut tokens: Vec<&str> = fixtures::GAMMA1_WORD.split(' ').collect();
        let target = walks[0].clone();
        assert!((0..tokens.len()).any(|_| {
            tokens.rotate_left(1);
            tokens.join(" ") == target
        }));
    }

    #[test]
    fn torus() {
        let t = fixtures::torus_graph();
        assert_eq!((t.genus(), t.boundary_count()), (1, 1));
        assert_eq!(t.boundary_walks(), vec!["e1 e2^-1 e1^-1 e2".to_string()]);
        let auts = t.automorphisms();
        let gen = cyclic_generator(&auts).unwrap();
        assert_eq!(gen.order, 4);
        let sig = t.induced_signature(gen).unwrap();
        assert_eq!((sig.quotient_genus, sig.cone_orders.clone()), (0, vec![2, 4, 4]));
        let report = t.filling_irreducibility_check(gen).unwrap();
        assert!(report.irreducible && report.predicted_irreducible);
    }

    #[test]
    fn automorphism_groups() {
        let a1 = fixtures::gamma1().automorphisms();
        assert_eq!(a1.len(), 2);
        let a2 = fixtures::gamma2().automorphisms();
        assert_eq!(a2.len(), 4);
        assert!(cyclic_generator(&a2).is_some());
        for group in [&a1, &a2] {
            for x in group.iter() {
                assert_eq!(4 % x.order, 0);
                for y in group.iter() {
                    let xy = compose(&x.perm, &y.perm);
                    assert!(group.iter().any(|z| z.perm == xy));
                }
            }
        }
    }

    #[test]
    fn signatures_of_minimal_graphs() {
        let g1 = fixtures::gamma1();
        let inv = &g1.automorphisms()[1];
        let s1 = g1.induced_signature(inv).unwrap();
        assert_eq!((s1.quotient_genus, s1.cone_orders.clone()), (0, vec![2; 6]));
        let g2 = fixtures::gamma2();
        let auts = g2.automorphisms();
        let s2 = g2.induced_signature(cyclic_generator(&auts).unwrap()).unwrap();
        assert_eq!((s2.quotient_genus, s2.cone_orders.clone()), (0, vec![2, 2, 4, 4]));
        assert!(!g1.filling_irreducibility_check(inv).unwrap().irreducible);
    }

    #[test]
    fn build_errors() {
        assert_eq!(
            FatGraph::build(&[vec![0, 1]], &[(0, 5)]),
            Err(FatGraphError::DanglingHalfEdge(5))
        );
        assert!(matches!(
            FatGraph::build(&[vec![0, 1, 0]], &[(0, 1)]),
            Err(FatGraphError::InconsistentRotation(_))
        ));
        assert_eq!(
            FatGraph::build(&[vec![0, 1], vec![2, 3]], &[(0, 1), (2, 3)]),
            Err(FatGraphError::Disconnected)
        );
        let theta = FatGraph::build(&[vec![0, 1, 2], vec![3, 4, 5]], &[(0, 3), (1, 5), (2, 4)]).unwrap();
        let auts = theta.automorphisms();
        assert!(matches!(
            theta.filling_irreducibility_check(&auts[auts.len() - 1]),
            Err(FatGraphError::NotFourRegular { .. })
        ));
    }

    #[test]
    fn genus_five_order_twelve_is_infeasible() {
        let cert = vertex_orbit_certificate(5, 12, 1, &[6, 12, 12]);
        assert_eq!(cert.required_vertices, 9);
        assert!(!cert.feasible);
        assert!(cert.vertex_candidate_sums.contains(&"12/6+12/12=3".to_string()));
        assert!(cert.orbit_sums.contains(&"12/6+12/12+12/12=4".to_string()));
    }

    #[test]
    fn json_shape() {
        let t = fixtures::torus_graph();
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(text, r#"{"vertices":[[0,1,2,3]],"edges":[[0,2],[1,3]]}"#);
        let back: FatGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back.genus(), 1);
    }
}
