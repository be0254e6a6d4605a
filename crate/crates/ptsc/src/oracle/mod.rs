//! Numeric and exact-arithmetic validation layer: seeded random
//! realizations, controllability tests, an exact-interpolation PSSC oracle
//! for single-input systems, and constructive uncontrollability witnesses.
//!
//! Decisions that admit exact arithmetic (ranks, interpolation, λ = 0 and
//! rational-root witnesses) run over big rationals; floating complex
//! arithmetic appears only where eigenvalues are inherently needed.

pub mod ratmat;
pub mod roots;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::bigraph::{self, dm_decompose, extreme_weight_max_matching, Edge, Sense};
use crate::error::{PtscError, Result};
use crate::pattern::{Pattern, PerturbStructure, SystemPattern};
use crate::ptsc1::{self, EdgeCheckTrace, Verdict};
use crate::sctrl;

pub use ratmat::{ctrb, rat, Rat, RatMat};

const SAMPLE_MAX: i64 = 1 << 20;
const RETRY_CAP: usize = 5;
const FLOAT_TOL: f64 = 1e-8;

/// A numeric realization of a system pattern, exact rationals.
#[derive(Clone, Debug)]
pub struct Realization {
    pub n: usize,
    pub m: usize,
    /// [A | B], n × (n+m).
    pub ab: RatMat,
    pub seed: u64,
}

impl Realization {
    pub fn a(&self) -> RatMat {
        self.ab.submatrix(&(0..self.n).collect::<Vec<_>>(), &(0..self.n).collect::<Vec<_>>())
    }

    pub fn b(&self) -> RatMat {
        self.ab
            .submatrix(&(0..self.n).collect::<Vec<_>>(), &(self.n..self.n + self.m).collect::<Vec<_>>())
    }
}

/// Independent uniform integers in [1, 2^20] on each `*` entry, iterated in
/// sorted support order; deterministic for a given seed.
pub fn sample_realization(pattern: &Pattern, seed: u64) -> RatMat {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = RatMat::zeros(pattern.rows(), pattern.cols());
    for &(i, j) in pattern.entries() {
        m.set(i - 1, j - 1, rat(rng.gen_range(1..=SAMPLE_MAX)));
    }
    m
}

pub fn sample_system(sys: &SystemPattern, seed: u64) -> Realization {
    Realization { n: sys.n(), m: sys.m(), ab: sample_realization(sys.ab(), seed), seed }
}

/// Exact-rational test: rank of [B, AB, ..., A^{n-1}B] equals n.
pub fn is_controllable_numeric(r: &Realization) -> bool {
    ctrb(&r.ab, r.n, r.m).rank() == r.n
}

/// Floating PBH cross-check: min over eigenvalues λ of A of
/// σ_min([A − λI, B]).
pub fn pbh_min_sigma(r: &Realization) -> f64 {
    let a = to_na(&r.a());
    let ab = to_na(&r.ab);
    let n = r.n;
    let eigs = a.complex_eigenvalues();
    let mut best = f64::INFINITY;
    for lam in eigs.iter() {
        let mut pencil = ab.map(|v| Complex64::new(v, 0.0));
        for i in 0..n {
            pencil[(i, i)] -= lam;
        }
        let sigma = pencil.svd(false, false).singular_values;
        best = best.min(sigma[sigma.len() - 1]);
    }
    best
}

/// σ_min of the controllability matrix of a numeric single-input pair.
pub fn sigma_min_ctrb_f64(a: &[Vec<f64>], b: &[f64]) -> f64 {
    let n = a.len();
    let mut c = DMatrix::<f64>::zeros(n, n);
    let a_na = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    let mut col = DMatrix::<f64>::from_fn(n, 1, |i, _| b[i]);
    for k in 0..n {
        for i in 0..n {
            c[(i, k)] = col[(i, 0)];
        }
        if k + 1 < n {
            col = &a_na * col;
        }
    }
    let sigma = c.svd(false, false).singular_values;
    sigma[sigma.len() - 1]
}

fn to_na(m: &RatMat) -> DMatrix<f64> {
    let rows = m.to_f64();
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| rows[i][j])
}

// ---------------------------------------------------------------------------
// Exact-interpolation oracle
// ---------------------------------------------------------------------------

/// det C(A(x), b(x)) with an additive indeterminate x at `entry` (1-based),
/// as exact polynomial coefficients (ascending). Single input only.
///
/// Interpolates through n(n+1)/2 + 3 points and asserts the two guard
/// coefficients above the declared degree bound vanish.
pub fn det_ctrb_in_entry(ab: &RatMat, n: usize, entry: (usize, usize)) -> Vec<Rat> {
    assert_eq!(ab.cols(), n + 1, "single-input determinant only");
    let bound = n * (n + 1) / 2;
    let points = bound + 3;
    let xs: Vec<Rat> = (0..points as i64).map(rat).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|x| {
            let mut m = ab.clone();
            m.add_to(entry.0 - 1, entry.1 - 1, x);
            ctrb(&m, n, 1).det()
        })
        .collect();
    let coeffs = roots::interpolate(&xs, &ys);
    assert!(
        roots::degree(&coeffs).map_or(true, |d| d <= bound),
        "fitted degree exceeds the n(n+1)/2 bound"
    );
    coeffs
}

/// Interpolation-based PSSC oracle for single-input systems. For each
/// perturbed entry, the remaining entries are merged and realized at random;
/// the determinant of the controllability matrix is reconstructed exactly as
/// a univariate polynomial in the perturbed entry. Any non-constant
/// dependence certifies PSSC; constancy across `trials` seeds yields PTSC.
pub fn pssc_oracle_single(
    sys: &SystemPattern,
    f: &PerturbStructure,
    trials: usize,
    base_seed: u64,
) -> Result<Verdict> {
    if sys.m() != 1 {
        return Err(PtscError::NotSingleInput(sys.m()));
    }
    if !sctrl::is_structurally_controllable(sys) {
        return Ok(Verdict::NotStructurallyControllable);
    }
    let n = sys.n();
    for e in f.edges_colwise() {
        let merged = sys.merged_with(&f.pattern().without_entry(e.0, e.1))?;
        for t in 0..trials {
            let mut seed = base_seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add((e.0 * 131 + e.1 * 17 + t) as u64);
            let mut ok = false;
            for retry in 0..=RETRY_CAP {
                let ab = sample_realization(merged.ab(), seed);
                let base = Realization { n, m: 1, ab: ab.clone(), seed };
                if !is_controllable_numeric(&base) {
                    seed = seed.wrapping_add(1 + retry as u64);
                    continue;
                }
                let coeffs = det_ctrb_in_entry(&ab, n, e);
                if coeffs.iter().skip(1).any(|c| !c.is_zero()) {
                    return Ok(Verdict::Pssc { edge: e });
                }
                ok = true;
                break;
            }
            if !ok {
                return Err(PtscError::DegenerateSample(RETRY_CAP));
            }
        }
    }
    Ok(Verdict::Ptsc)
}

// ---------------------------------------------------------------------------
// Witnesses
// ---------------------------------------------------------------------------

/// A numeric uncontrollability certificate: q*([A+ΔA−λI, B+ΔB]) = 0 with
/// support(Δ) ⊆ F̄. `residual` is recorded, never assumed; on the exact
/// rational path it is exactly zero and the rational data is retained.
#[derive(Clone, Debug)]
pub struct Witness {
    pub lambda: Complex64,
    pub q: Vec<Complex64>,
    pub delta: Vec<(usize, usize, Complex64)>,
    pub residual: f64,
    pub exact: bool,
    pub lambda_rat: Option<Rat>,
    pub delta_rat: Option<Vec<(usize, usize, Rat)>>,
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct C(Complex64);
        impl Serialize for C {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(2))?;
                seq.serialize_element(&self.0.re)?;
                seq.serialize_element(&self.0.im)?;
                seq.end()
            }
        }
        struct D((usize, usize, Complex64));
        impl Serialize for D {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(3))?;
                seq.serialize_element(&self.0 .0)?;
                seq.serialize_element(&self.0 .1)?;
                seq.serialize_element(&C(self.0 .2))?;
                seq.end()
            }
        }
        let mut st = serializer.serialize_struct("Witness", 5)?;
        st.serialize_field("lambda", &C(self.lambda))?;
        st.serialize_field("q", &self.q.iter().map(|&z| C(z)).collect::<Vec<_>>())?;
        st.serialize_field("delta", &self.delta.iter().map(|&d| D(d)).collect::<Vec<_>>())?;
        st.serialize_field("residual", &self.residual)?;
        st.serialize_field("exact", &self.exact)?;
        st.end()
    }
}

/// Relative PBH residual ‖q*([A+ΔA−λI, B+ΔB])‖ / (‖q‖·max(1, ‖M‖)) of a
/// witness against the original realization, in floating arithmetic.
pub fn witness_residual(orig: &RatMat, n: usize, m: usize, w: &Witness) -> f64 {
    let base = to_na(orig);
    let mut pencil = DMatrix::from_fn(n, n + m, |i, j| Complex64::new(base[(i, j)], 0.0));
    for &(i, j, v) in &w.delta {
        pencil[(i - 1, j - 1)] += v;
    }
    for i in 0..n {
        pencil[(i, i)] -= w.lambda;
    }
    let scale: f64 = pencil.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let qn: f64 = w.q.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut worst: f64 = 0.0;
    for j in 0..n + m {
        let s: Complex64 = (0..n).map(|i| w.q[i] * pencil[(i, j)]).sum();
        worst = worst.max(s.norm());
    }
    worst / (qn * scale)
}

fn rat_to_c(v: &Rat) -> Complex64 {
    Complex64::new(v.to_f64().unwrap(), 0.0)
}

/// Samples the original system and random values for the perturbed entries
/// in `extras` (sorted order), returning the original and the merged matrix.
fn sample_with_extras(
    sys: &SystemPattern,
    extras: &[(usize, usize)],
    seed: u64,
) -> (RatMat, Vec<(usize, usize, Rat)>, RatMat) {
    let orig = sample_realization(sys.ab(), seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xD1B5_4A32_D192_ED03);
    let vals: Vec<(usize, usize, Rat)> =
        extras.iter().map(|&(i, j)| (i, j, rat(rng.gen_range(1..=SAMPLE_MAX)))).collect();
    let mut merged = orig.clone();
    for (i, j, v) in &vals {
        merged.add_to(i - 1, j - 1, v);
    }
    (orig, vals, merged)
}

fn exact_witness(
    lambda: Rat,
    q: Vec<Rat>,
    delta: Vec<(usize, usize, Rat)>,
    orig: &RatMat,
    n: usize,
    m: usize,
) -> Witness {
    // exact verification: q^T (orig + Δ - λ diag) = 0
    let mut pert = orig.clone();
    for (i, j, v) in &delta {
        pert.add_to(i - 1, j - 1, v);
    }
    for i in 0..n {
        let v = pert.get(i, i).clone() - &lambda;
        pert.set(i, i, v);
    }
    for j in 0..n + m {
        let s: Rat = (0..n).map(|i| &q[i] * pert.get(i, j)).sum();
        assert!(s.is_zero(), "exact witness must annihilate every column");
    }
    Witness {
        lambda: rat_to_c(&lambda),
        q: q.iter().map(rat_to_c).collect(),
        delta: delta.iter().map(|(i, j, v)| (*i, *j, rat_to_c(v))).collect(),
        residual: 0.0,
        exact: true,
        lambda_rat: Some(lambda),
        delta_rat: Some(delta),
    }
}

/// Zero-mode witness for a single-input perturbed entry (i, j): q spans the
/// left null space of the merged [A, b] without column j, and the (i, j)
/// perturbation cancels qᵀ·column j. Exact rational arithmetic throughout.
pub fn synth_witness_zero(
    sys: &SystemPattern,
    f: &PerturbStructure,
    edge: (usize, usize),
    seed: u64,
) -> Result<Witness> {
    let (i, j) = edge;
    let n = sys.n();
    let m = sys.m();
    let merged_pat = sys.merged_with(&f.pattern().without_entry(i, j))?;
    let (blocked, _) = ptsc1::zero_mode_blocked(merged_pat.ab(), i, j);
    if blocked {
        return Err(PtscError::NotApplicable(format!(
            "no zero-mode attack at ({i}, {j}): row is outside the null support"
        )));
    }
    let extras: Vec<(usize, usize)> =
        f.pattern().entries().iter().copied().filter(|&e| e != edge).collect();
    let keep_cols: Vec<usize> = (0..n + m).filter(|&c| c != j - 1).collect();
    let all_rows: Vec<usize> = (0..n).collect();
    for retry in 0..=RETRY_CAP {
        let (orig, vals, merged) = sample_with_extras(sys, &extras, seed.wrapping_add(retry as u64));
        let sub = merged.submatrix(&all_rows, &keep_cols);
        let Some((q, nullity)) = sub.left_null_vector() else { continue };
        if nullity != 1 || q[i - 1].is_zero() {
            continue;
        }
        let s: Rat = (0..n).map(|k| &q[k] * merged.get(k, j - 1)).sum();
        let delta_ij = -s / &q[i - 1];
        let mut delta = vals;
        delta.push((i, j, delta_ij));
        delta.sort_unstable_by_key(|&(a, b, _)| (a, b));
        return Ok(exact_witness(Rat::zero(), q, delta, &orig, n, m));
    }
    Err(PtscError::DegenerateSample(RETRY_CAP))
}

/// Exact polynomial det(M_block − λ E_block) of one DM component of the
/// pencil, where λ sits on the positions flagged as λ-edges.
fn component_det_poly(block: &RatMat, lambda_pos: &[(usize, usize)]) -> Vec<Rat> {
    let k = block.rows();
    let xs: Vec<Rat> = (0..=k as i64).map(rat).collect();
    let ys: Vec<Rat> = xs
        .iter()
        .map(|x| {
            let mut m = block.clone();
            for &(r, c) in lambda_pos {
                let v = m.get(r, c).clone() - x;
                m.set(r, c, v);
            }
            m.det()
        })
        .collect();
    roots::interpolate(&xs, &ys)
}

/// Nonzero roots of an exact polynomial: the λ-power is stripped exactly,
/// then a rational root is returned when the quotient is linear, otherwise
/// the floating companion roots.
enum NonzeroRoots {
    Rational(Rat),
    Floating(Vec<Complex64>),
    None,
}

fn nonzero_roots(coeffs: &[Rat]) -> NonzeroRoots {
    let Some(ord) = roots::order_at_zero(coeffs) else { return NonzeroRoots::None };
    let stripped: Vec<Rat> = coeffs[ord..].to_vec();
    match roots::degree(&stripped) {
        None | Some(0) => NonzeroRoots::None,
        Some(1) => NonzeroRoots::Rational(-&stripped[0] / &stripped[1]),
        Some(_) => {
            let mut zs = roots::roots_f64(&stripped);
            zs.sort_by(|a, b| b.norm().partial_cmp(&a.norm()).unwrap());
            NonzeroRoots::Floating(zs)
        }
    }
}

/// Nonzero-mode witness for a single-input perturbed entry, driven by the
/// checker trace (its `offending` component supplies the root).
pub fn synth_witness_nonzero(
    sys: &SystemPattern,
    f: &PerturbStructure,
    trace: &EdgeCheckTrace,
    seed: u64,
) -> Result<Witness> {
    let Some(k) = trace.offending else {
        return Err(PtscError::NotApplicable("trace certifies no nonzero-mode attack".into()));
    };
    let (i, j) = trace.edge;
    let merged_pat = sys.merged_with(&f.pattern().without_entry(i, j))?;
    let extras: Vec<(usize, usize)> =
        f.pattern().entries().iter().copied().filter(|&e| e != trace.edge).collect();

    let pencil = ptsc1::pencil_without_column(merged_pat.ab(), j);
    let dm = dm_decompose(&pencil.graph);
    let comp = &dm.components[k - 1];

    for retry in 0..=RETRY_CAP {
        let (orig, vals, merged) = sample_with_extras(sys, &extras, seed.wrapping_add(retry as u64));
        // numeric block of component k with λ positions
        let block_cols: Vec<usize> = comp.cols.iter().map(|&c| pencil.col_ids[c] - 1).collect();
        let block = merged.submatrix(&comp.rows, &block_cols);
        let lambda_pos: Vec<(usize, usize)> = comp
            .rows
            .iter()
            .enumerate()
            .flat_map(|(bi, &r)| {
                block_cols
                    .iter()
                    .enumerate()
                    .filter(move |&(_, &c)| c == r)
                    .map(move |(bj, _)| (bi, bj))
            })
            .collect();
        let poly = component_det_poly(&block, &lambda_pos);
        match nonzero_roots(&poly) {
            NonzeroRoots::Rational(z) => {
                if let Some(w) = try_exact_nonzero(sys, &orig, &vals, &merged, i, j, &z) {
                    return Ok(w);
                }
            }
            NonzeroRoots::Floating(zs) => {
                let scale = zs.first().map(|z| z.norm()).unwrap_or(1.0).max(1.0);
                for z in zs.iter().filter(|z| z.norm() > FLOAT_TOL * scale) {
                    if let Some(w) = try_float_nonzero(sys, &orig, &vals, &merged, i, j, *z) {
                        return Ok(w);
                    }
                }
            }
            NonzeroRoots::None => {}
        }
    }
    Err(PtscError::DegenerateSample(RETRY_CAP))
}

fn try_exact_nonzero(
    sys: &SystemPattern,
    orig: &RatMat,
    vals: &[(usize, usize, Rat)],
    merged: &RatMat,
    i: usize,
    j: usize,
    z: &Rat,
) -> Option<Witness> {
    if z.is_zero() {
        return None;
    }
    let (n, m) = (sys.n(), sys.m());
    let mut pencil = merged.clone();
    for d in 0..n {
        let v = pencil.get(d, d).clone() - z;
        pencil.set(d, d, v);
    }
    let keep_cols: Vec<usize> = (0..n + m).filter(|&c| c != j - 1).collect();
    let sub = pencil.submatrix(&(0..n).collect::<Vec<_>>(), &keep_cols);
    let (q, nullity) = sub.left_null_vector()?;
    if nullity != 1 || q[i - 1].is_zero() {
        return None;
    }
    let s: Rat = (0..n).map(|k| &q[k] * pencil.get(k, j - 1)).sum();
    let delta_ij = -s / &q[i - 1];
    let mut delta: Vec<(usize, usize, Rat)> = vals.to_vec();
    delta.push((i, j, delta_ij));
    delta.sort_unstable_by_key(|&(a, b, _)| (a, b));
    Some(exact_witness(z.clone(), q, delta, orig, n, m))
}

fn try_float_nonzero(
    sys: &SystemPattern,
    orig: &RatMat,
    vals: &[(usize, usize, Rat)],
    merged: &RatMat,
    i: usize,
    j: usize,
    z: Complex64,
) -> Option<Witness> {
    let (n, m) = (sys.n(), sys.m());
    let base = to_na(merged);
    let mut pencil = DMatrix::from_fn(n, n + m, |r, c| Complex64::new(base[(r, c)], 0.0));
    for d in 0..n {
        pencil[(d, d)] -= z;
    }
    let keep: Vec<usize> = (0..n + m).filter(|&c| c != j - 1).collect();
    let sub = DMatrix::from_fn(n, keep.len(), |r, c| pencil[(r, keep[c])]);
    let (q, nullity) = roots::left_null_complex(&sub)?;
    if nullity != 1 {
        return None;
    }
    let qn: f64 = q.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    if q[i - 1].norm() < 1e-9 * qn {
        return None;
    }
    let s: Complex64 = (0..n).map(|k| q[k] * pencil[(k, j - 1)]).sum();
    let delta_ij = -s / q[i - 1];
    let mut delta: Vec<(usize, usize, Complex64)> =
        vals.iter().map(|(a, b, v)| (*a, *b, rat_to_c(v))).collect();
    delta.push((i, j, delta_ij));
    delta.sort_unstable_by_key(|&(a, b, _)| (a, b));
    let w = Witness {
        lambda: z,
        q,
        delta,
        residual: 0.0,
        exact: false,
        lambda_rat: None,
        delta_rat: None,
    };
    let residual = witness_residual(orig, n, m, &w);
    if residual > 1e-6 {
        return None;
    }
    Some(Witness { residual, ..w })
}

/// Multi-input zero-mode witness from a condition-c1 certificate: all
/// perturbed entries get random values, q annihilates the K-columns, and
/// every column outside K is cancelled through a perturbed row (or already
/// annihilated). Exact rational arithmetic.
pub fn synth_witness_multi_zero(
    sys: &SystemPattern,
    f: &PerturbStructure,
    k: &[usize],
    seed: u64,
) -> Result<Witness> {
    let (n, m) = (sys.n(), sys.m());
    let extras: Vec<(usize, usize)> = f.pattern().entries().to_vec();
    let all_rows: Vec<usize> = (0..n).collect();
    let k_cols: Vec<usize> = k.iter().map(|&c| c - 1).collect();
    for retry in 0..=RETRY_CAP {
        let (orig, vals, merged) = sample_with_extras(sys, &extras, seed.wrapping_add(retry as u64));
        let sub = merged.submatrix(&all_rows, &k_cols);
        let Some((q, nullity)) = sub.left_null_vector() else { continue };
        if nullity != 1 {
            continue;
        }
        // keep the random values inside K; reassign every outside column
        let mut delta: Vec<(usize, usize, Rat)> =
            vals.iter().filter(|(_, j, _)| k.contains(j)).cloned().collect();
        let mut feasible = true;
        for j in (1..=n + m).filter(|j| !k.contains(j)) {
            let s: Rat = (0..n).map(|r| &q[r] * orig.get(r, j - 1)).sum();
            if s.is_zero() {
                continue;
            }
            let pick = f
                .pattern()
                .column_support(j)
                .into_iter()
                .find(|&i| !q[i - 1].is_zero());
            match pick {
                Some(i) => delta.push((i, j, -&s / &q[i - 1])),
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if !feasible {
            continue;
        }
        delta.sort_unstable_by_key(|&(a, b, _)| (a, b));
        return Ok(exact_witness(Rat::zero(), q, delta, &orig, n, m));
    }
    Err(PtscError::DegenerateSample(RETRY_CAP))
}

/// Multi-input nonzero-mode witness from a condition-c2 certificate:
/// perturbed entries inside K become generic, a component of the K-pencil
/// supplies the root, and each outside column is cancelled through a
/// perturbed row. Falls back across components, roots, and samples.
pub fn synth_witness_multi_nonzero(
    sys: &SystemPattern,
    f: &PerturbStructure,
    k: &[usize],
    seed: u64,
) -> Result<Witness> {
    let n = sys.n();
    let h_f = sys.ab().or_join(f.pattern())?;
    let pencil = ptsc1::build_pencil_bigraph(&h_f, k);
    let dm = dm_decompose(&pencil.graph);
    if dm.matching.size != n {
        return Err(PtscError::NotApplicable("K-pencil lacks a full matching".into()));
    }
    let extras: Vec<(usize, usize)> = f
        .pattern()
        .entries()
        .iter()
        .copied()
        .filter(|&(_, j)| k.contains(&j))
        .collect();

    for retry in 0..=RETRY_CAP {
        let (orig, vals, merged) = sample_with_extras(sys, &extras, seed.wrapping_add(retry as u64));
        for comp in &dm.components {
            let block_cols: Vec<usize> = comp.cols.iter().map(|&c| k[c] - 1).collect();
            let block = merged.submatrix(&comp.rows, &block_cols);
            let lambda_pos: Vec<(usize, usize)> = comp
                .rows
                .iter()
                .enumerate()
                .flat_map(|(bi, &r)| {
                    block_cols
                        .iter()
                        .enumerate()
                        .filter(move |&(_, &c)| c == r)
                        .map(move |(bj, _)| (bi, bj))
                })
                .collect();
            let poly = component_det_poly(&block, &lambda_pos);
            match nonzero_roots(&poly) {
                NonzeroRoots::Rational(z) => {
                    if let Some(w) =
                        try_exact_multi(sys, f, &orig, &vals, &merged, &k_cols(k), &z)
                    {
                        return Ok(w);
                    }
                }
                NonzeroRoots::Floating(zs) => {
                    let scale = zs.first().map(|z| z.norm()).unwrap_or(1.0).max(1.0);
                    for z in zs.iter().filter(|z| z.norm() > FLOAT_TOL * scale) {
                        if let Some(w) =
                            try_float_multi(sys, f, &orig, &vals, &merged, &k_cols(k), *z)
                        {
                            return Ok(w);
                        }
                    }
                }
                NonzeroRoots::None => {}
            }
        }
    }
    Err(PtscError::DegenerateSample(RETRY_CAP))
}

fn k_cols(k: &[usize]) -> Vec<usize> {
    k.iter().map(|&c| c - 1).collect()
}

fn try_exact_multi(
    sys: &SystemPattern,
    f: &PerturbStructure,
    orig: &RatMat,
    vals: &[(usize, usize, Rat)],
    merged: &RatMat,
    k0: &[usize],
    z: &Rat,
) -> Option<Witness> {
    if z.is_zero() {
        return None;
    }
    let (n, m) = (sys.n(), sys.m());
    let mut pencil = merged.clone();
    for d in 0..n {
        let v = pencil.get(d, d).clone() - z;
        pencil.set(d, d, v);
    }
    let sub = pencil.submatrix(&(0..n).collect::<Vec<_>>(), k0);
    let (q, nullity) = sub.left_null_vector()?;
    if nullity != 1 {
        return None;
    }
    let mut delta: Vec<(usize, usize, Rat)> = vals.to_vec();
    for j in (1..=n + m).filter(|j| !k0.contains(&(j - 1))) {
        let s: Rat = (0..n).map(|r| &q[r] * pencil.get(r, j - 1)).sum();
        if s.is_zero() {
            continue;
        }
        let i = f.pattern().column_support(j).into_iter().find(|&i| !q[i - 1].is_zero())?;
        delta.push((i, j, -&s / &q[i - 1]));
    }
    delta.sort_unstable_by_key(|&(a, b, _)| (a, b));
    Some(exact_witness(z.clone(), q, delta, orig, n, m))
}

fn try_float_multi(
    sys: &SystemPattern,
    f: &PerturbStructure,
    orig: &RatMat,
    vals: &[(usize, usize, Rat)],
    merged: &RatMat,
    k0: &[usize],
    z: Complex64,
) -> Option<Witness> {
    let (n, m) = (sys.n(), sys.m());
    let base = to_na(merged);
    let mut pencil = DMatrix::from_fn(n, n + m, |r, c| Complex64::new(base[(r, c)], 0.0));
    for d in 0..n {
        pencil[(d, d)] -= z;
    }
    let sub = DMatrix::from_fn(n, k0.len(), |r, c| pencil[(r, k0[c])]);
    let (q, nullity) = roots::left_null_complex(&sub)?;
    if nullity != 1 {
        return None;
    }
    let qn: f64 = q.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let mut delta: Vec<(usize, usize, Complex64)> =
        vals.iter().map(|(a, b, v)| (*a, *b, rat_to_c(v))).collect();
    for j in (1..=n + m).filter(|j| !k0.contains(&(j - 1))) {
        let s: Complex64 = (0..n).map(|r| q[r] * pencil[(r, j - 1)]).sum();
        if s.norm() < 1e-10 * qn {
            continue;
        }
        let i = f
            .pattern()
            .column_support(j)
            .into_iter()
            .find(|&i| q[i - 1].norm() > 1e-9 * qn)?;
        delta.push((i, j, -s / q[i - 1]));
    }
    delta.sort_unstable_by_key(|&(a, b, _)| (a, b));
    let w = Witness {
        lambda: z,
        q,
        delta,
        residual: 0.0,
        exact: false,
        lambda_rat: None,
        delta_rat: None,
    };
    let residual = witness_residual(orig, n, m, &w);
    if residual > 1e-6 {
        return None;
    }
    Some(Witness { residual, ..w })
}

/// Synthesizes a witness for any PSSC verdict of the single-input checker,
/// choosing the zero-mode construction when available and the nonzero-mode
/// construction otherwise.
pub fn synth_witness(
    sys: &SystemPattern,
    f: &PerturbStructure,
    trace: &EdgeCheckTrace,
    seed: u64,
) -> Result<Witness> {
    if !trace.zero_mode_ok {
        synth_witness_zero(sys, f, trace.edge, seed)
    } else {
        synth_witness_nonzero(sys, f, trace, seed)
    }
}

// ---------------------------------------------------------------------------
// Pencil root count (no-self-loop identity)
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct PencilRootReport {
    /// Roots of the sampled det(M − λE) with |λ| above tolerance.
    pub numeric_count: usize,
    /// γ_max − γ_min of the associated weighted bipartite graph.
    pub matching_prediction: usize,
    /// All numeric roots, for diagnostic logging.
    pub roots: Vec<(f64, f64)>,
}

/// Samples a realization of the square generic pattern `m_pat`, forms the
/// pencil M − λE with E given by `e_pat` (at most one entry per row and
/// column, disjoint from the pattern support), and compares the nonzero-root
/// count of its exact determinant polynomial against γ_max − γ_min.
pub fn pencil_nonzero_root_count(
    m_pat: &Pattern,
    e_pat: &Pattern,
    seed: u64,
) -> Result<PencilRootReport> {
    let n = m_pat.rows();
    if m_pat.cols() != n || e_pat.rows() != n || e_pat.cols() != n {
        return Err(PtscError::DimensionMismatch("pencil patterns must be square and equal".into()));
    }
    for r in 1..=n {
        if e_pat.entries().iter().filter(|&&(i, _)| i == r).count() > 1 {
            return Err(PtscError::NotApplicable(format!("E has two entries in row {r}")));
        }
    }
    for c in 1..=n {
        if e_pat.column_support(c).len() > 1 {
            return Err(PtscError::NotApplicable(format!("E has two entries in column {c}")));
        }
    }
    if e_pat.entries().iter().any(|&(i, j)| m_pat.contains(i, j)) {
        return Err(PtscError::NotApplicable("self-loop: E overlaps the pattern support".into()));
    }

    // bipartite view: pattern entries are plain, E entries are λ-edges
    let mut edges: Vec<Edge> = m_pat
        .entries()
        .iter()
        .map(|&(i, j)| Edge::plain(i - 1, j - 1))
        .collect();
    edges.extend(e_pat.entries().iter().map(|&(i, j)| Edge {
        left: i - 1,
        right: j - 1,
        weight: 1,
        lambda: true,
        self_loop: false,
    }));
    let g = bigraph::BipartiteGraph::new(n, n, edges)?;
    if bigraph::max_matching(&g).size != n {
        return Err(PtscError::NotApplicable("pencil graph has no perfect matching".into()));
    }
    let gamma_min = extreme_weight_max_matching(&g, Sense::Min).1;
    let gamma_max = extreme_weight_max_matching(&g, Sense::Max).1;

    let m_num = sample_realization(m_pat, seed);
    let lambda_pos: Vec<(usize, usize)> =
        e_pat.entries().iter().map(|&(i, j)| (i - 1, j - 1)).collect();
    let poly = component_det_poly(&m_num, &lambda_pos);
    let zs = roots::roots_f64(&poly);
    let scale = zs.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let numeric_count = zs.iter().filter(|z| z.norm() > FLOAT_TOL * scale).count();
    Ok(PencilRootReport {
        numeric_count,
        matching_prediction: (gamma_max - gamma_min) as usize,
        roots: zs.iter().map(|z| (z.re, z.im)).collect(),
    })
}
