//! Path algebras of quivers modulo homogeneous relations.
//!
//! Paths compose left to right: `αβ` means "first α, then β", so it requires
//! `target(α) = source(β)`. The algebra is built one path-length layer at a
//! time; every layer is a quotient of (previous layer) ⊗ (arrows), which keeps
//! the work proportional to the size of the answer instead of the number of
//! paths in the free path algebra.

use super::{AlgError, Algebra, Elem, Hints, Provenance};
use crate::exactla::{vecops, FieldSpec, Q, Subspace};
use std::collections::HashMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverPresentation {
    pub vertices: Vec<String>,
    /// `(name, source, target)` with vertex indices.
    pub arrows: Vec<(String, usize, usize)>,
    /// Linear combinations of paths, each path a list of arrow indices.
    pub relations: Vec<Vec<(Q, Vec<usize>)>>,
    pub nilpotency_bound: usize,
}

pub const DEFAULT_NILPOTENCY_BOUND: usize = 12;

impl QuiverPresentation {
    pub fn new(vertices: &[&str], arrows: &[(&str, usize, usize)]) -> QuiverPresentation {
        QuiverPresentation {
            vertices: vertices.iter().map(|s| s.to_string()).collect(),
            arrows: arrows.iter().map(|(n, s, t)| (n.to_string(), *s, *t)).collect(),
            relations: Vec::new(),
            nilpotency_bound: DEFAULT_NILPOTENCY_BOUND,
        }
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.0 == name)
    }

    /// Reads a path written as arrow names separated by `*` or whitespace.
    pub fn parse_path(&self, s: &str) -> Result<Vec<usize>, AlgError> {
        s.split(|c: char| c == '*' || c.is_whitespace())
            .filter(|w| !w.is_empty())
            .map(|w| self.arrow_index(w).ok_or_else(|| AlgError::BadQuiver(format!("unknown arrow {:?}", w))))
            .collect()
    }

    pub fn add_monomial_relation(&mut self, path: &str) -> Result<(), AlgError> {
        let p = self.parse_path(path)?;
        self.relations.push(vec![(Q::one(), p)]);
        Ok(())
    }

    fn endpoints(&self, path: &[usize]) -> Result<(usize, usize), AlgError> {
        for w in path.windows(2) {
            if self.arrows[w[0]].2 != self.arrows[w[1]].1 {
                return Err(AlgError::BadQuiver(format!(
                    "arrows {} and {} do not compose",
                    self.arrows[w[0]].0, self.arrows[w[1]].0
                )));
            }
        }
        Ok((self.arrows[path[0]].1, self.arrows[*path.last().unwrap()].2))
    }

    fn validate(&self) -> Result<(), AlgError> {
        let nv = self.vertices.len();
        for (name, s, t) in &self.arrows {
            if *s >= nv || *t >= nv {
                return Err(AlgError::BadQuiver(format!("arrow {} has an endpoint out of range", name)));
            }
        }
        for (i, rel) in self.relations.iter().enumerate() {
            let mut shape: Option<(usize, usize, usize)> = None;
            for (_, p) in rel {
                if p.is_empty() {
                    return Err(AlgError::NonAdmissible(format!("relation {} contains a trivial path", i)));
                }
                let (s, t) = self.endpoints(p)?;
                let cur = (s, t, p.len());
                match shape {
                    None => shape = Some(cur),
                    Some(sh) if sh.0 != s || sh.1 != t => {
                        return Err(AlgError::NonAdmissible(format!("relation {} mixes paths with different endpoints", i)))
                    }
                    Some(sh) if sh.2 != p.len() => {
                        return Err(AlgError::NonAdmissible(format!(
                            "relation {} is not homogeneous in path length; only graded relations are supported",
                            i
                        )))
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }
}

struct Layer {
    /// `(basis index in previous layer, arrow)` for each candidate.
    cands: Vec<(usize, usize)>,
    cand_index: HashMap<(usize, usize), usize>,
    relations: Subspace,
    /// Candidate indices that form the basis of this layer.
    basis: Vec<usize>,
    source: Vec<usize>,
    target: Vec<usize>,
    words: Vec<Vec<usize>>,
}

impl Layer {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, v: &[Q]) -> Vec<Q> {
        self.relations.quotient_coords(v)
    }
}

/// Builds the path algebra modulo the relation ideal.
pub fn path_algebra(q: &QuiverPresentation, field: FieldSpec) -> Result<Algebra, AlgError> {
    q.validate()?;
    let nv = q.vertices.len();
    let na = q.arrows.len();
    let f = field;
    let mut rels_by_len: HashMap<usize, Vec<&Vec<(Q, Vec<usize>)>>> = HashMap::new();
    for r in &q.relations {
        rels_by_len.entry(r[0].1.len()).or_default().push(r);
    }
    // layer 0: vertices
    let mut layers: Vec<Layer> = vec![Layer {
        cands: Vec::new(),
        cand_index: HashMap::new(),
        relations: Subspace::zero(0, f),
        basis: (0..nv).collect(),
        source: (0..nv).collect(),
        target: (0..nv).collect(),
        words: vec![Vec::new(); nv],
    }];
    // left[a][L][b] = a · (basis b of layer L), in layer L+1 coordinates
    let mut left: Vec<Vec<Vec<Vec<Q>>>> = vec![Vec::new(); na];

    // coordinates of a path in its layer
    fn reduce_path(layers: &[Layer], nv: usize, arrows: &[(String, usize, usize)], path: &[usize], f: FieldSpec) -> Vec<Q> {
        let _ = arrows;
        if path.is_empty() {
            unreachable!();
        }
        let l = path.len();
        let prev = if l == 1 {
            let mut v = vecops::zero(nv);
            v[arrows[path[0]].1] = Q::one();
            v
        } else {
            reduce_path(layers, nv, arrows, &path[..l - 1], f)
        };
        let layer = &layers[l];
        let mut v = vecops::zero(layer.cands.len());
        let last = path[l - 1];
        for (b, c) in prev.iter().enumerate() {
            if !c.is_zero() {
                if let Some(&idx) = layer.cand_index.get(&(b, last)) {
                    v[idx] = f.add(&v[idx], c);
                }
            }
        }
        layer.reduce(&v)
    }

    let mut l = 0;
    loop {
        let prev = &layers[l];
        if prev.dim() == 0 {
            break;
        }
        if l == q.nilpotency_bound {
            return Err(AlgError::NotFiniteDimensional { bound: q.nilpotency_bound });
        }
        let mut cands = Vec::new();
        let mut cand_index = HashMap::new();
        for b in 0..prev.dim() {
            for (a, arrow) in q.arrows.iter().enumerate() {
                if arrow.1 == prev.target[b] {
                    cand_index.insert((b, a), cands.len());
                    cands.push((b, a));
                }
            }
        }
        let nc = cands.len();
        // Relation space of the new layer.
        let mut gens: Vec<Vec<Q>> = Vec::new();
        if l >= 1 {
            let below = &layers[l];
            for a in 0..na {
                let lam = &left[a][l - 1];
                for k in &below.relations.basis {
                    let mut v = vecops::zero(nc);
                    for (ci, coef) in k.iter().enumerate() {
                        if coef.is_zero() {
                            continue;
                        }
                        let (bp, c) = below.cands[ci];
                        for (x, lc) in lam[bp].iter().enumerate() {
                            if lc.is_zero() {
                                continue;
                            }
                            if let Some(&idx) = cand_index.get(&(x, c)) {
                                f.fma(&mut v[idx], coef, lc);
                            }
                        }
                    }
                    if !vecops::is_zero(&v) {
                        gens.push(v);
                    }
                }
            }
        }
        let partial = Layer {
            cands: cands.clone(),
            cand_index: cand_index.clone(),
            relations: Subspace::zero(nc, f),
            basis: Vec::new(),
            source: Vec::new(),
            target: Vec::new(),
            words: Vec::new(),
        };
        layers.push(partial);
        if let Some(rs) = rels_by_len.get(&(l + 1)) {
            for r in rs {
                let mut v = vecops::zero(nc);
                for (c, p) in r.iter() {
                    let c = f.embed(c).map_err(|e| AlgError::BadQuiver(e.to_string()))?;
                    let pv = {
                        // unreduced candidate vector of the path
                        let prefix = if p.len() == 1 {
                            let mut v0 = vecops::zero(nv);
                            v0[q.arrows[p[0]].1] = Q::one();
                            v0
                        } else {
                            reduce_path(&layers, nv, &q.arrows, &p[..p.len() - 1], f)
                        };
                        let mut w = vecops::zero(nc);
                        for (b, pc) in prefix.iter().enumerate() {
                            if let Some(&idx) = cand_index.get(&(b, *p.last().unwrap())) {
                                w[idx] = f.add(&w[idx], pc);
                            }
                        }
                        w
                    };
                    vecops::axpy(f, &mut v, &c, &pv);
                }
                if !vecops::is_zero(&v) {
                    gens.push(v);
                }
            }
        }
        let relations = Subspace::span(nc, f, &gens);
        let basis = relations.complement_indices();
        let prev = &layers[l];
        let source: Vec<usize> = basis.iter().map(|&ci| prev.source[cands[ci].0]).collect();
        let target: Vec<usize> = basis.iter().map(|&ci| q.arrows[cands[ci].1].2).collect();
        let words: Vec<Vec<usize>> = basis
            .iter()
            .map(|&ci| {
                let mut w = prev.words[cands[ci].0].clone();
                w.push(cands[ci].1);
                w
            })
            .collect();
        let new = layers.last_mut().unwrap();
        new.relations = relations;
        new.basis = basis;
        new.source = source;
        new.target = target;
        new.words = words;
        // Left multiplication by arrows from layer l into layer l+1.
        for a in 0..na {
            let mut maps = Vec::with_capacity(layers[l].dim());
            for b in 0..layers[l].dim() {
                let v = if l == 0 {
                    if q.arrows[a].2 == b {
                        reduce_path(&layers, nv, &q.arrows, &[a], f)
                    } else {
                        vecops::zero(layers[1].dim())
                    }
                } else {
                    let (bp, c) = layers[l].cands[layers[l].basis[b]];
                    let lam = &left[a][l - 1][bp];
                    let nl = &layers[l + 1];
                    let mut w = vecops::zero(nl.cands.len());
                    for (x, lc) in lam.iter().enumerate() {
                        if !lc.is_zero() {
                            if let Some(&idx) = nl.cand_index.get(&(x, c)) {
                                w[idx] = f.add(&w[idx], lc);
                            }
                        }
                    }
                    nl.reduce(&w)
                };
                maps.push(v);
            }
            left[a].push(maps);
        }
        l += 1;
    }
    let layers: Vec<Layer> = layers.into_iter().filter(|x| x.dim() > 0).collect();
    // Global basis: layer by layer.
    let offsets: Vec<usize> = layers
        .iter()
        .scan(0, |acc, x| {
            let o = *acc;
            *acc += x.dim();
            Some(o)
        })
        .collect();
    let dim: usize = layers.iter().map(Layer::dim).sum();
    let nlayers = layers.len();
    // right[c][L][z]: z·c from layer L into layer L+1 (local coordinates)
    let right = |c: usize, lay: usize, z: usize| -> Option<Vec<Q>> {
        if lay + 1 >= nlayers || layers[lay].target[z] != q.arrows[c].1 {
            return None;
        }
        let nl = &layers[lay + 1];
        let mut w = vecops::zero(nl.cands.len());
        let idx = nl.cand_index[&(z, c)];
        w[idx] = Q::one();
        Some(nl.reduce(&w))
    };
    let locate = |g: usize| -> (usize, usize) {
        let lay = offsets.iter().rposition(|&o| o <= g).unwrap();
        (lay, g - offsets[lay])
    };
    // products[x][y], filled by increasing layer of y
    let mut products: Vec<Vec<(usize, Q)>> = vec![Vec::new(); dim * dim];
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by_key(|&g| locate(g).0);
    for &y in &order {
        let (ly, iy) = locate(y);
        for x in 0..dim {
            let (lx, ix) = locate(x);
            let prod: Vec<(usize, Q)> = if ly == 0 {
                if layers[lx].target[ix] == iy {
                    vec![(x, Q::one())]
                } else {
                    Vec::new()
                }
            } else if lx == 0 {
                if layers[ly].source[iy] == ix {
                    vec![(y, Q::one())]
                } else {
                    Vec::new()
                }
            } else {
                let (yp, c) = layers[ly].cands[layers[ly].basis[iy]];
                let yp_global = offsets[ly - 1] + yp;
                let xy = products[x * dim + yp_global].clone();
                let mut acc: Vec<Q> = vecops::zero(dim);
                for (z, coef) in xy {
                    let (lz, iz) = locate(z);
                    if let Some(v) = right(c, lz, iz) {
                        for (t, vc) in v.iter().enumerate() {
                            if !vc.is_zero() {
                                let g = offsets[lz + 1] + t;
                                f.fma(&mut acc[g], &coef, vc);
                            }
                        }
                    }
                }
                acc.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
            };
            products[x * dim + y] = prod;
        }
    }
    let mut unit = vecops::zero(dim);
    for v in 0..nv {
        unit[v] = Q::one();
    }
    let mut labels = Vec::with_capacity(dim);
    for layer in &layers {
        for (i, w) in layer.words.iter().enumerate() {
            if w.is_empty() {
                labels.push(format!("e{}", q.vertices[layer.source[i]]));
            } else {
                labels.push(w.iter().map(|&a| q.arrows[a].0.clone()).collect::<Vec<_>>().join("*"));
            }
        }
    }
    let hints = Hints {
        primitive_idempotents: Some((0..nv).map(|v| vecops::unit(dim, v)).collect()),
        radical: Some((nv..dim).map(|i| vecops::unit(dim, i)).collect()),
    };
    let prov = Provenance::Quiver {
        vertices: q.vertices.clone(),
        arrows: q.arrows.iter().map(|a| a.0.clone()).collect(),
    };
    let alg = Algebra::from_sparse(f, dim, products, unit, Some(labels), prov)?;
    Ok(alg.with_hints(hints))
}

/// Vertex idempotent of a quiver algebra by vertex label.
pub fn vertex_idempotent(a: &Algebra, label: &str) -> Option<Elem> {
    let want = format!("e{}", label);
    a.labels().iter().position(|l| *l == want).map(|i| a.basis(i))
}

/// The two-vertex quiver with α: 1 → 2 and β: 2 → 1.
pub fn two_cycle() -> QuiverPresentation {
    QuiverPresentation::new(&["1", "2"], &[("alpha", 0, 1), ("beta", 1, 0)])
}

/// Two-cycle modulo `βα` (dimension 5).
pub fn example_a5(field: FieldSpec) -> Algebra {
    let mut q = two_cycle();
    q.add_monomial_relation("beta*alpha").unwrap();
    path_algebra(&q, field).unwrap()
}

/// Two-cycle modulo `βαβ` (dimension 7).
pub fn example_b7(field: FieldSpec) -> Algebra {
    let mut q = two_cycle();
    q.add_monomial_relation("beta*alpha*beta").unwrap();
    path_algebra(&q, field).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::testalg::QQ;

    /// Independent count: enumerate all paths up to a length and drop those
    /// containing a forbidden monomial as a contiguous subword.
    fn monomial_count(q: &QuiverPresentation, forbidden: &[Vec<usize>], max_len: usize) -> usize {
        let mut count = q.vertices.len();
        let mut frontier: Vec<Vec<usize>> = (0..q.arrows.len()).map(|a| vec![a]).collect();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in frontier {
                let bad = forbidden.iter().any(|f| p.windows(f.len()).any(|w| w == f.as_slice()));
                if bad {
                    continue;
                }
                count += 1;
                for a in 0..q.arrows.len() {
                    if q.arrows[*p.last().unwrap()].2 == q.arrows[a].1 {
                        let mut np = p.clone();
                        np.push(a);
                        next.push(np);
                    }
                }
            }
            frontier = next;
        }
        count
    }

    #[test]
    fn empty_quiver_is_ground_field() {
        let q = QuiverPresentation::new(&["1"], &[]);
        let a = path_algebra(&q, QQ).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.labels(), &["e1".to_string()]);
    }

    #[test]
    fn example_dimensions() {
        let a = example_a5(QQ);
        assert_eq!(a.dim(), 5);
        let mut labels = a.labels().to_vec();
        labels.sort();
        assert_eq!(labels, vec!["alpha", "alpha*beta", "beta", "e1", "e2"]);
        let b = example_b7(QQ);
        assert_eq!(b.dim(), 7);
        let q = two_cycle();
        assert_eq!(monomial_count(&q, &[vec![1, 0]], 10), 5);
        assert_eq!(monomial_count(&q, &[vec![1, 0, 1]], 10), 7);
    }

    #[test]
    fn left_to_right_products() {
        let a = example_a5(QQ);
        let idx = |s: &str| a.labels().iter().position(|l| l == s).unwrap();
        let (e1, e2, al, be, ab) = (idx("e1"), idx("e2"), idx("alpha"), idx("beta"), idx("alpha*beta"));
        let b = |i| a.basis(i);
        assert_eq!(a.mul(&b(al), &b(be)), b(ab));
        assert!(vecops::is_zero(&a.mul(&b(be), &b(al))));
        assert_eq!(a.mul(&b(e1), &b(al)), b(al));
        assert_eq!(a.mul(&b(al), &b(e2)), b(al));
        assert!(vecops::is_zero(&a.mul(&b(al), &b(e1))));
    }

    #[test]
    fn commutative_square_relation() {
        // 1 -a-> 2 -b-> 4, 1 -c-> 3 -d-> 4 with ab = cd
        let mut q = QuiverPresentation::new(&["1", "2", "3", "4"], &[("a", 0, 1), ("b", 1, 3), ("c", 0, 2), ("d", 2, 3)]);
        q.relations.push(vec![(Q::one(), vec![0, 1]), (Q::from_i64(-1), vec![2, 3])]);
        let a = path_algebra(&q, QQ).unwrap();
        assert_eq!(a.dim(), 4 + 4 + 1);
    }

    #[test]
    fn rejects_bad_presentations() {
        let mut q = QuiverPresentation::new(&["1"], &[("x", 0, 0)]);
        assert_eq!(path_algebra(&q, QQ).unwrap_err(), AlgError::NotFiniteDimensional { bound: 12 });
        q.relations.push(vec![(Q::one(), vec![0, 0]), (Q::from_i64(-1), vec![0, 0, 0])]);
        assert!(matches!(path_algebra(&q, QQ), Err(AlgError::NonAdmissible(_))));
        let mut q = QuiverPresentation::new(&["1"], &[("x", 0, 0)]);
        q.add_monomial_relation("x x x").unwrap();
        assert_eq!(path_algebra(&q, QQ).unwrap().dim(), 3);
        let mut q = QuiverPresentation::new(&["1", "2"], &[("a", 0, 1), ("b", 0, 1)]);
        q.relations.push(vec![(Q::one(), vec![0]), (Q::one(), vec![1])]);
        assert_eq!(path_algebra(&q, QQ).unwrap().dim(), 3);
        let q = QuiverPresentation::new(&["1", "2"], &[("a", 0, 1), ("b", 1, 1)]);
        assert!(path_algebra(&q, QQ).is_err());
    }

    #[test]
    fn two_loops_free_truncation() {
        // k<x,y>/(all words of length 3): dim 1 + 2 + 4 = 7
        let mut q = QuiverPresentation::new(&["1"], &[("x", 0, 0), ("y", 0, 0)]);
        for w in ["x x x", "x x y", "x y x", "x y y", "y x x", "y x y", "y y x", "y y y"] {
            q.add_monomial_relation(w).unwrap();
        }
        let a = path_algebra(&q, QQ).unwrap();
        assert_eq!(a.dim(), 7);
        // xy - yx relation: commutative polynomial ring truncated.
        let mut q = QuiverPresentation::new(&["1"], &[("x", 0, 0), ("y", 0, 0)]);
        q.relations.push(vec![(Q::one(), vec![0, 1]), (Q::from_i64(-1), vec![1, 0])]);
        for w in ["x x", "y y"] {
            q.add_monomial_relation(w).unwrap();
        }
        let a = path_algebra(&q, QQ).unwrap();
        assert_eq!(a.dim(), 4);
        assert!(a.is_commutative());
    }
}
