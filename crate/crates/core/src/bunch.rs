//! Bunches of cones in a projected cone.
//!
//! A nonempty collection Θ of projected faces is a bunch when a projected
//! face τ₀ belongs to Θ exactly if `∅ ≠ τ₀° ∩ τ° ≠ τ°` for every other
//! `τ ∈ Θ`.

use crate::cone::{relint_overlap, Cone};
use crate::face::FaceSet;
use crate::linalg::{elementary_divisors, is_surjective, rat_inverse, Int, IntMatrix, Rat, Sublattice};
use crate::projected::{FaceImages, ProjectedCone};
use crate::{par, Error, Limits, Result};
use num_traits::{One, Zero};
use std::sync::{Arc, OnceLock};

/// One member of a bunch: a cone in `K_Q` and a face of γ mapping onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub cone: Cone,
    pub witness: FaceSet,
}

#[derive(Clone)]
pub struct Bunch {
    pc: Arc<ProjectedCone>,
    elements: Vec<Element>,
    limits: Limits,
    cov: OnceLock<Vec<FaceSet>>,
}

impl PartialEq for Bunch {
    fn eq(&self, other: &Self) -> bool {
        self.pc == other.pc && self.elements == other.elements
    }
}

impl Eq for Bunch {}

impl std::fmt::Debug for Bunch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Bunch")
            .field("pc", &self.pc)
            .field("cones", &self.cones())
            .finish()
    }
}

/// Integer weight vectors `w_1, .., w_n` generating `K = Z^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSystem {
    pub k_rank: usize,
    pub weights: Vec<Vec<Int>>,
}

impl WeightSystem {
    pub fn new(k_rank: usize, weights: Vec<Vec<Int>>) -> Result<Self> {
        if weights.iter().any(|w| w.len() != k_rank) {
            return Err(Error::DimensionMismatch("weight length".into()));
        }
        if !is_surjective(&IntMatrix::from_columns(k_rank, &weights)) {
            return Err(Error::InvalidProjectedCone("weights do not generate K".into()));
        }
        Ok(WeightSystem { k_rank, weights })
    }

    pub fn from_i64(k_rank: usize, weights: &[&[i64]]) -> Result<Self> {
        WeightSystem::new(k_rank, weights.iter().map(|w| crate::linalg::ints(w)).collect())
    }

    /// Distinct weights in order of first appearance, with multiplicities.
    pub fn distinct(&self) -> Vec<(Vec<Int>, usize)> {
        let mut out: Vec<(Vec<Int>, usize)> = Vec::new();
        for w in &self.weights {
            match out.iter_mut().find(|(v, _)| v == w) {
                Some((_, m)) => *m += 1,
                None => out.push((w.clone(), 1)),
            }
        }
        out
    }

    pub fn cone(&self, idx: &[usize]) -> Cone {
        let g: Vec<Vec<Int>> = idx.iter().map(|&i| self.weights[i].clone()).collect();
        Cone::from_generators(self.k_rank, &g)
    }
}

/// Outcome of checking the bunch condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub failure: Option<String>,
}

/// The geometric properties of `X_Θ` read off from the bunch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dictionary {
    pub q_factorial: bool,
    pub smooth: bool,
    pub only_constant_functions: bool,
    pub full: bool,
    pub complete: bool,
}

/// Pairwise relations among the distinct projected faces.
struct Relations {
    n: usize,
    overlap: Vec<bool>,
    // sub[a * n + b]: a° ⊆ b°
    sub: Vec<bool>,
}

impl Relations {
    fn compute(cones: &[Cone]) -> Self {
        let n = cones.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
        let rel = par::map(&pairs, |&(a, b)| {
            let ov = a == b || relint_overlap(&cones[a], &cones[b]);
            let ab = ov && cones[b].contains_cone(&cones[a]);
            let ba = ov && cones[a].contains_cone(&cones[b]);
            (ov, ab, ba)
        });
        let mut overlap = vec![false; n * n];
        let mut sub = vec![false; n * n];
        for (&(a, b), &(ov, ab, ba)) in pairs.iter().zip(&rel) {
            overlap[a * n + b] = ov;
            overlap[b * n + a] = ov;
            sub[a * n + b] = ab;
            sub[b * n + a] = ba;
        }
        Relations { n, overlap, sub }
    }

    fn overlap(&self, a: usize, b: usize) -> bool {
        self.overlap[a * self.n + b]
    }

    fn sub(&self, a: usize, b: usize) -> bool {
        self.sub[a * self.n + b]
    }

    /// `∅ ≠ τ₀° ∩ τ° ≠ τ°`.
    fn condition(&self, t0: usize, t: usize) -> bool {
        self.overlap(t0, t) && !self.sub(t, t0)
    }
}

fn describe(c: &Cone) -> String {
    format!("{c:?}")
}

/// Check the bunch condition for candidate cones in a projected cone.
pub fn verify_bunch(pc: &ProjectedCone, candidate: &[Cone], limits: &Limits) -> Result<Verdict> {
    let images = pc.images(limits)?;
    let mut ids = Vec::new();
    for (i, c) in candidate.iter().enumerate() {
        ids.push(images.id_of(c).ok_or(Error::NotAProjectedFace(i))?);
    }
    ids.sort();
    ids.dedup();
    Ok(verify_ids(&images, &ids))
}

fn verify_ids(images: &FaceImages, ids: &[usize]) -> Verdict {
    if ids.is_empty() {
        return Verdict {
            ok: false,
            failure: Some("bunch nonemptiness: the collection is empty".into()),
        };
    }
    let cones = images.cones();
    // ∅ ≠ τ₀° ∩ τ° ≠ τ°, using that τ° ⊆ τ₀° iff τ ⊆ τ₀ and the relints meet
    let check =
        |t0: usize, t: usize| relint_overlap(&cones[t0], &cones[t]) && !cones[t0].contains_cone(&cones[t]);
    let results = par::map_range(cones.len(), |t0| {
        let bad = ids.iter().copied().find(|&t| t != t0 && !check(t0, t));
        (t0, bad)
    });
    for (t0, bad) in results {
        let member = ids.binary_search(&t0).is_ok();
        match (member, bad) {
            (true, Some(t)) => {
                let reason = if relint_overlap(&cones[t0], &cones[t]) {
                    "relative interior containment"
                } else {
                    "overlap"
                };
                return Verdict {
                    ok: false,
                    failure: Some(format!(
                        "bunch {reason}: members {} and {} violate ∅ ≠ τ₀° ∩ τ° ≠ τ°",
                        describe(&cones[t0]),
                        describe(&cones[t])
                    )),
                };
            }
            (false, None) => {
                return Verdict {
                    ok: false,
                    failure: Some(format!(
                        "bunch maximality: projected face {} satisfies the condition but is missing",
                        describe(&cones[t0])
                    )),
                };
            }
            _ => {}
        }
    }
    Verdict {
        ok: true,
        failure: None,
    }
}

impl Bunch {
    /// Verified construction.
    pub fn new(pc: Arc<ProjectedCone>, cones: Vec<Cone>, limits: &Limits) -> Result<Self> {
        let v = verify_bunch(&pc, &cones, limits)?;
        if !v.ok {
            return Err(Error::ConditionViolated(v.failure.unwrap_or_default()));
        }
        Ok(Bunch::new_unchecked(pc, cones, limits))
    }

    pub fn from_faces(pc: Arc<ProjectedCone>, faces: &[FaceSet], limits: &Limits) -> Result<Self> {
        let cones = faces.iter().map(|&f| pc.projected_face(f)).collect();
        Bunch::new(pc, cones, limits)
    }

    /// Trusted construction for collections already known to be bunches.
    pub(crate) fn new_unchecked(pc: Arc<ProjectedCone>, mut cones: Vec<Cone>, limits: &Limits) -> Self {
        cones.sort();
        cones.dedup();
        let weights = pc.weights();
        let elements = cones
            .into_iter()
            .map(|cone| {
                let witness =
                    FaceSet::from_indices((0..weights.len()).filter(|&i| cone.contains_int(&weights[i])));
                Element { cone, witness }
            })
            .collect();
        Bunch {
            pc,
            elements,
            limits: limits.clone(),
            cov: OnceLock::new(),
        }
    }

    pub fn pc(&self) -> &Arc<ProjectedCone> {
        &self.pc
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn cones(&self) -> Vec<Cone> {
        self.elements.iter().map(|e| e.cone.clone()).collect()
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn k_rank(&self) -> usize {
        self.pc.k_rank()
    }

    pub fn e_rank(&self) -> usize {
        self.pc.e_rank()
    }

    pub fn verify(&self) -> Result<Verdict> {
        verify_bunch(&self.pc, &self.cones(), &self.limits)
    }

    fn images(&self) -> Arc<FaceImages> {
        self.pc
            .images(&self.limits)
            .expect("face images were computable when the bunch was built")
    }

    fn element_ids(&self, images: &FaceImages) -> Vec<usize> {
        self.elements
            .iter()
            .map(|e| images.id_of(&e.cone).expect("element is a projected face"))
            .collect()
    }

    /// Minimal faces γ₀ of γ with `Q(γ₀) ⊇ τ` for some `τ ∈ Θ`, sorted.
    pub fn covering_collection(&self) -> Vec<FaceSet> {
        self.cov
            .get_or_init(|| {
                let images = self.images();
                let cones = images.cones();
                let covers: Vec<bool> = cones
                    .iter()
                    .map(|c| self.elements.iter().any(|e| c.contains_cone(&e.cone)))
                    .collect();
                let e = self.e_rank();
                let is_cover = |f: FaceSet| covers[images.cone_id(f)];
                let mut out: Vec<FaceSet> = FaceSet::all(e)
                    .filter(|&f| is_cover(f) && f.iter().all(|i| !is_cover(f.remove(i))))
                    .collect();
                out.sort();
                out
            })
            .clone()
    }

    /// Per facet `γ_i` (all generators but `i`): `Q(lin(γ_i) ∩ E) = K` and
    /// some `τ ∈ Θ` has `τ° ⊆ Q(γ_i)°`.
    pub fn is_standard(&self) -> bool {
        let e = self.e_rank();
        let full = Sublattice::full(self.k_rank());
        (0..e).all(|i| {
            let facet = FaceSet::full(e).remove(i);
            if self.pc.face_lattice_image(facet) != full {
                return false;
            }
            let img = self.pc.projected_face(facet);
            self.elements
                .iter()
                .any(|el| img.contains_cone(&el.cone) && relint_overlap(&el.cone, &img))
        })
    }

    pub fn is_free(&self) -> bool {
        self.pc.is_free()
    }

    pub fn is_geometric(&self) -> bool {
        let k = self.k_rank();
        self.elements.iter().all(|e| e.cone.dim() == k)
    }

    pub fn is_simple(&self) -> bool {
        let k = self.k_rank();
        let full = Sublattice::full(k);
        self.is_standard()
            && self.covering_collection().iter().all(|&g| {
                g.len() == k && self.pc.q_injective_on_face(g) && self.pc.face_lattice_image(g) == full
            })
    }

    /// Faces γ₀ with `τ° ⊆ Q(γ₀)°` for some `τ ∈ Θ`; these index the cones
    /// of the associated fan.
    pub fn relevant_faces(&self) -> Vec<FaceSet> {
        let images = self.images();
        let ids = self.element_ids(&images);
        let cones = images.cones();
        let hosts: Vec<bool> = par::map(cones, |c| {
            ids.iter().any(|&t| {
                let tau = &cones[t];
                c.contains_cone(tau) && relint_overlap(tau, c)
            })
        });
        let mut out: Vec<FaceSet> = FaceSet::all(self.e_rank())
            .filter(|&f| hosts[images.cone_id(f)])
            .collect();
        out.sort();
        out
    }

    /// The properties of `X_Θ`, decided on the bunch.
    pub fn dictionary(&self) -> Dictionary {
        let k = self.k_rank();
        let e = self.e_rank();
        let cov = self.covering_collection();
        let images = self.images();
        let dual = self.pc.dual();
        let full_k = Sublattice::full(k);

        let q_factorial = self.elements.iter().all(|el| el.cone.dim() == k);

        let smooth = cov.iter().all(|&g| {
            let star: Vec<Vec<Int>> = g
                .complement(e)
                .iter()
                .map(|j| dual.gamma_generators()[j].clone())
                .collect();
            let regular = elementary_divisors(&IntMatrix::from_rows(e, star.clone()))
                .iter()
                .all(One::is_one)
                && crate::linalg::rank(&star) == star.len();
            regular && self.pc.face_lattice_image(g) == full_k
        });

        let only_constant_functions = self.pc.weights().iter().all(|w| w.iter().any(|x| !x.is_zero()))
            && images.cone_of(self.pc.all_faces()).is_strictly_convex();

        let full = cov.iter().all(|&g| images.cone_of(g).is_simplicial());

        let has_simplicial = self.elements.iter().any(|el| el.cone.is_simplicial());
        let complete = has_simplicial
            && self.relevant_faces().into_iter().all(|g0| {
                let below = cov.iter().filter(|g1| g1.is_subset(g0)).count();
                below != 1 || cov.contains(&g0)
            });

        Dictionary {
            q_factorial,
            smooth,
            only_constant_functions,
            full,
            complete,
        }
    }

    /// For a free bunch, the weights `Q(g_i)` with respect to the basis of
    /// `E` given by the generators of γ.
    pub fn weight_system(&self) -> Result<WeightSystem> {
        if !self.is_free() {
            return Err(Error::NotFree);
        }
        Ok(WeightSystem {
            k_rank: self.k_rank(),
            weights: self.pc.weights(),
        })
    }
}

/// The free bunch given by weight vectors: `E = Z^n`, γ the
/// orthant and `Q(e_i) = w_i`.
pub fn bunch_from_weights(ws: &WeightSystem, cones: &[Cone], limits: &Limits) -> Result<Bunch> {
    let pc = Arc::new(ProjectedCone::from_weights(ws.k_rank, &ws.weights)?);
    Bunch::new(pc, cones.to_vec(), limits)
}

/// Same, with the cones given as index lists into the weights.
pub fn bunch_from_weight_indices(ws: &WeightSystem, cones: &[Vec<usize>], limits: &Limits) -> Result<Bunch> {
    let cs: Vec<Cone> = cones.iter().map(|idx| ws.cone(idx)).collect();
    bunch_from_weights(ws, &cs, limits)
}

/// Bron–Kerbosch with pivoting over bitset adjacency.
fn maximal_cliques(adj: &[u64]) -> Vec<u64> {
    fn go(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let px = p | x;
        let pivot = (0..adj.len())
            .filter(|&u| px >> u & 1 == 1)
            .max_by_key(|&u| (adj[u] & p).count_ones())
            .expect("nonempty");
        let cand = p & !adj[pivot];
        for v in 0..adj.len() {
            if cand >> v & 1 == 0 {
                continue;
            }
            go(adj, r | 1 << v, p & adj[v], x & adj[v], out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let mut out = Vec::new();
    let all = if adj.is_empty() {
        0
    } else {
        u64::MAX >> (64 - adj.len())
    };
    go(adj, 0, all, 0, &mut out);
    out
}

/// All bunches in a projected cone, in canonical order.
pub fn enumerate_bunches(pc: &Arc<ProjectedCone>, limits: &Limits) -> Result<Vec<Bunch>> {
    let images = pc.images(limits)?;
    let cones = images.cones();
    let t = cones.len();
    if t > limits.max_enum || t > 64 {
        return Err(Error::EnumerationTooLarge {
            count: t,
            limit: limits.max_enum.min(64),
        });
    }
    let rel = Relations::compute(cones);
    let adj: Vec<u64> = (0..t)
        .map(|a| {
            (0..t)
                .filter(|&b| b != a && rel.condition(a, b) && rel.condition(b, a))
                .fold(0u64, |m, b| m | 1 << b)
        })
        .collect();
    let mut found: Vec<Vec<usize>> = maximal_cliques(&adj)
        .into_iter()
        .filter(|&clique| {
            (0..t)
                .filter(|&t0| clique >> t0 & 1 == 0)
                .all(|t0| (0..t).any(|s| clique >> s & 1 == 1 && !rel.condition(t0, s)))
        })
        .map(|clique| (0..t).filter(|&s| clique >> s & 1 == 1).collect())
        .collect();
    found.sort();
    let mut out: Vec<Bunch> = found
        .into_iter()
        .map(|ids: Vec<usize>| {
            Bunch::new_unchecked(
                pc.clone(),
                ids.iter().map(|&i| cones[i].clone()).collect(),
                limits,
            )
        })
        .collect();
    out.sort_by_key(|a| a.cones());
    Ok(out)
}

/// A lattice automorphism `Φ` of `K` carrying the weights of `b1` onto
/// those of `b2` (with multiplicity) and Θ₁ onto Θ₂.
pub fn free_bunch_isomorphic(b1: &Bunch, b2: &Bunch, limits: &Limits) -> Result<Option<IntMatrix>> {
    if !b1.is_free() || !b2.is_free() {
        return Err(Error::NotFree);
    }
    let k = b1.k_rank();
    if k != b2.k_rank() || b1.e_rank() != b2.e_rank() || b1.elements.len() != b2.elements.len() {
        return Ok(None);
    }
    let w1 = b1.weight_system()?.distinct();
    let w2 = b2.weight_system()?.distinct();
    let mut sorted2: Vec<(Vec<Int>, usize)> = w2.clone();
    sorted2.sort();
    let theta2 = b2.cones();

    let matches = |phi: &IntMatrix| -> bool {
        let mut img: Vec<(Vec<Int>, usize)> = w1.iter().map(|(w, m)| (phi.mul_vec(w), *m)).collect();
        img.sort();
        if img != sorted2 {
            return false;
        }
        let mut th: Vec<Cone> = b1.elements.iter().map(|e| e.cone.linear_image(phi)).collect();
        th.sort();
        th == theta2
    };
    if k == 0 {
        let phi = IntMatrix::zeros(0, 0);
        return Ok(matches(&phi).then_some(phi));
    }

    // a spanning subset of distinct weights of b1
    let mut basis: Vec<usize> = Vec::new();
    for (i, (w, _)) in w1.iter().enumerate() {
        let mut rows: Vec<Vec<Int>> = basis.iter().map(|&j| w1[j].0.clone()).collect();
        rows.push(w.clone());
        if crate::linalg::rank(&rows) == rows.len() {
            basis.push(i);
        }
        if basis.len() == k {
            break;
        }
    }
    if basis.len() < k {
        return Ok(None);
    }
    let bmat = IntMatrix::from_columns(k, &basis.iter().map(|&i| w1[i].0.clone()).collect::<Vec<_>>());
    let binv = rat_inverse(&bmat).expect("independent weights");
    let d = w2.len();
    let total = (d as f64).powi(k as i32);
    if total > limits.max_search as f64 {
        return Err(Error::SearchTooLarge {
            limit: limits.max_search,
        });
    }
    let mut choice = vec![0usize; k];
    loop {
        let distinct = {
            let mut c = choice.clone();
            c.sort();
            c.windows(2).all(|p| p[0] != p[1])
        };
        let mult_ok = basis.iter().zip(&choice).all(|(&i, &j)| w1[i].1 == w2[j].1);
        if distinct && mult_ok {
            let target: Vec<Vec<Int>> = choice.iter().map(|&j| w2[j].0.clone()).collect();
            // Φ = T · B^{-1}
            let mut phi = IntMatrix::zeros(k, k);
            let mut integral = true;
            'outer: for r in 0..k {
                for c in 0..k {
                    let v: Rat = (0..k)
                        .map(|s| Rat::from(target[s][r].clone()) * &binv[s][c])
                        .sum();
                    if !v.is_integer() {
                        integral = false;
                        break 'outer;
                    }
                    phi.set(r, c, v.to_integer());
                }
            }
            if integral && phi.is_unimodular() && matches(&phi) {
                return Ok(Some(phi));
            }
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(None);
            }
            choice[pos] += 1;
            if choice[pos] < d {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

/// Group bunches up to free-bunch isomorphism, keeping the first of each class.
pub fn dedup_isomorphic(bunches: Vec<Bunch>, limits: &Limits) -> Result<Vec<Bunch>> {
    let mut kept: Vec<Bunch> = Vec::new();
    for b in bunches {
        let mut dup = false;
        for k in &kept {
            if free_bunch_isomorphic(k, &b, limits)?.is_some() {
                dup = true;
                break;
            }
        }
        if !dup {
            kept.push(b);
        }
    }
    Ok(kept)
}

/// The inclusion-minimal cones of a list, deduplicated and sorted.
pub(crate) fn minimal_cones(cones: Vec<Cone>) -> Vec<Cone> {
    let mut cs = cones;
    cs.sort();
    cs.dedup();
    let keep: Vec<bool> = cs
        .iter()
        .map(|c| !cs.iter().any(|d| d != c && c.contains_cone(d)))
        .collect();
    cs.into_iter()
        .zip(keep)
        .filter_map(|(c, k)| k.then_some(c))
        .collect()
}
