//! Constant-rank and constant-signature certification, the lemma-level
//! machine checks, intersection dimension computations, maximality probing,
//! and randomized falsification of over-dimensional families.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Deref, DerefMut};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matrix::{
    matrix_unit, poly_det, signature, span_rank, sym_minor_det, Matrix, MinorCache, PMatrix,
    QMatrix, Signature,
};
use crate::mpoly::MPoly;
use crate::scalar::{
    format_rational, parse_rational, random_rational, rat, serde_rational, small_random_rational,
    trial_rng, Rational,
};
use crate::subspace::AffineSubspace;
use crate::upoly::{default_isolation_width, RootInterval, UPoly};
use crate::{Error, Result};

/// A rational assignment to family parameters, keyed by parameter name.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Point(pub BTreeMap<String, Rational>);

impl Deref for Point {
    type Target = BTreeMap<String, Rational>;
    fn deref(&self) -> &Self::Target {
        &self.0
    }
}

impl DerefMut for Point {
    fn deref_mut(&mut self) -> &mut Self::Target {
        &mut self.0
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}: {}", format_rational(v))?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, &format_rational(v))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut out = BTreeMap::new();
        for (k, v) in raw {
            out.insert(k, parse_rational(&v).map_err(serde::de::Error::custom)?);
        }
        Ok(Point(out))
    }
}

pub fn random_point<R: rand::Rng>(params: &[String], rng: &mut R) -> Point {
    Point(
        params
            .iter()
            .map(|p| (p.clone(), random_rational(rng)))
            .collect(),
    )
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
}

/// A concrete point where the family's rank differs from the claim.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Counterexample {
    pub point: Point,
    pub rank: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum UpperEvidence {
    /// Every (r+1)-minor of the parametric family is the zero polynomial.
    SymbolicMinors { minors: usize },
    /// Rank observed <= r at sampled points only.
    Sampled { points: usize, seed: u64 },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LowerEvidence {
    /// A named r x r block with constant nonzero determinant.
    UnitDet {
        rows: Vec<usize>,
        cols: Vec<usize>,
        #[serde(with = "serde_rational")]
        det: Rational,
    },
    /// A named block of shape [[I, T'],[T, -I]]: its determinant equals
    /// +-(1 + sum of squared minors of T), verified symbolically, hence is
    /// bounded away from zero at every real point.
    CauchyBinet {
        rows: Vec<usize>,
        cols: Vec<usize>,
        squares: usize,
    },
    /// Rank observed >= r at sampled points only.
    Sampled { points: usize, seed: u64 },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RankCertificate {
    pub claimed_rank: usize,
    pub mode: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<UpperEvidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<LowerEvidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl RankCertificate {
    pub fn is_certified(&self) -> bool {
        self.verdict == Verdict::Certified
    }

    fn refuted(claimed_rank: usize, mode: &str, point: Point, rank: usize) -> Self {
        debug_assert_ne!(rank, claimed_rank);
        Self {
            claimed_rank,
            mode: mode.into(),
            verdict: Verdict::Refuted,
            upper: None,
            lower: None,
            counterexample: Some(Counterexample { point, rank }),
        }
    }

    fn certified(
        claimed_rank: usize,
        mode: &str,
        upper: UpperEvidence,
        lower: LowerEvidence,
    ) -> Self {
        Self {
            claimed_rank,
            mode: mode.into(),
            verdict: Verdict::Certified,
            upper: Some(upper),
            lower: Some(lower),
            counterexample: None,
        }
    }
}

/// How to certify. Symbolic proves the upper half exactly and falls back to
/// seeded sampling when the lower half is not structurally recognized;
/// structural allows no fallback and returns Inconclusive instead;
/// randomized is Schwartz-Zippel evidence only.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CertifyMode {
    Symbolic { seed: u64, trials: usize },
    Randomized { seed: u64, trials: usize },
    Structural,
}

impl CertifyMode {
    pub fn symbolic() -> Self {
        CertifyMode::Symbolic { seed: 0, trials: 64 }
    }

    fn name(&self) -> &'static str {
        match self {
            CertifyMode::Symbolic { .. } => "symbolic",
            CertifyMode::Randomized { .. } => "randomized",
            CertifyMode::Structural => "structural",
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn rank_at(pm: &PMatrix, point: &Point) -> usize {
    pm.eval_point(point)
        .expect("search points assign every family parameter")
        .rank()
}

/// Candidate values 0, 1, -1, 2, -2, ...
fn candidate_value(i: usize) -> Rational {
    if i == 0 {
        Rational::zero()
    } else if i % 2 == 1 {
        rat((i as i64 + 1) / 2)
    } else {
        rat(-(i as i64 / 2))
    }
}

/// A point where a nonzero polynomial does not vanish, found one variable at
/// a time; degree+1 candidate values per variable always suffice.
fn find_nonzero_point(poly: &MPoly) -> Point {
    debug_assert!(!poly.is_zero());
    let mut p = poly.clone();
    let mut point = Point::default();
    for name in poly.params() {
        for i in 0.. {
            let c = candidate_value(i);
            let mut a = BTreeMap::new();
            a.insert(name.clone(), c.clone());
            let q = p.substitute(&a);
            if !q.is_zero() {
                point.insert(name.clone(), c);
                p = q;
                break;
            }
        }
    }
    point
}

/// Rational grid for break searches: `values[0]` is the background value the
/// sparse-first enumeration deviates from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GridSpec {
    pub values: Vec<Rational>,
    pub cap: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self::with_bound(2)
    }
}

impl GridSpec {
    /// 0, +-1, ..., +-bound, capped at 10^5 evaluations.
    pub fn with_bound(bound: i64) -> Self {
        let mut values = vec![Rational::zero()];
        for v in 1..=bound.max(0) {
            values.push(rat(v));
            values.push(rat(-v));
        }
        Self { values, cap: 100_000 }
    }
}

/// Visits assignments over `params` from `values`, ordered by the number of
/// coordinates deviating from the background `values[0]`, so sparse points
/// come first. `visit` returns false to stop (a hit). Returns (evaluations,
/// stopped-by-visit).
fn sparse_grid_search(
    params: &[String],
    values: &[Rational],
    cap: usize,
    mut visit: impl FnMut(&Point) -> bool,
) -> (usize, bool) {
    let k = params.len();
    let background = values.first().cloned().unwrap_or_else(Rational::zero);
    let deviations: Vec<&Rational> = values.iter().skip(1).collect();
    let mut evals = 0usize;
    for support in 0..=k {
        if support > 0 && deviations.is_empty() {
            break;
        }
        for combo in combinations(k, support) {
            let mut digits = vec![0usize; support];
            loop {
                let mut point = Point::default();
                for p in params {
                    point.insert(p.clone(), background.clone());
                }
                for (slot, &pi) in combo.iter().enumerate() {
                    point.insert(params[pi].clone(), deviations[digits[slot]].clone());
                }
                evals += 1;
                if !visit(&point) {
                    return (evals, true);
                }
                if evals >= cap {
                    return (evals, false);
                }
                // odometer over deviation values
                let mut pos = 0;
                while pos < support {
                    digits[pos] += 1;
                    if digits[pos] < deviations.len() {
                        break;
                    }
                    digits[pos] = 0;
                    pos += 1;
                }
                if pos == support {
                    break;
                }
            }
            if support == 0 {
                break;
            }
        }
    }
    (evals, false)
}

/// Decides whether a parametric family has constant rank r and assembles the
/// evidence. The affine-subspace entry point is [`certify_constant_rank`].
pub fn certify_parametric(pm: &PMatrix, r: usize, mode: CertifyMode) -> Result<RankCertificate> {
    let max_rank = pm.rows().min(pm.cols());
    if r > max_rank {
        return Err(Error::BadRank { claimed: r, max: max_rank });
    }
    let params: Vec<String> = pm.params().into_iter().collect();
    let mode_name = mode.name();

    if let CertifyMode::Randomized { seed, trials } = mode {
        let hit = (0..trials).into_par_iter().find_map_first(|i| {
            let mut rng = trial_rng(seed, i as u64);
            let point = random_point(&params, &mut rng);
            let rank = rank_at(pm, &point);
            (rank != r).then_some((point, rank))
        });
        return Ok(match hit {
            Some((point, rank)) => RankCertificate::refuted(r, mode_name, point, rank),
            None => RankCertificate::certified(
                r,
                mode_name,
                UpperEvidence::Sampled { points: trials, seed },
                LowerEvidence::Sampled { points: trials, seed },
            ),
        });
    }

    // Upper half: every (r+1)-minor must be the zero polynomial.
    let mut minors_checked = 0;
    if r < max_rank {
        let row_subs = combinations(pm.rows(), r + 1);
        let col_subs = combinations(pm.cols(), r + 1);
        minors_checked = row_subs.len() * col_subs.len();
        let bad_minor = row_subs.par_iter().find_map_first(|rows| {
            let mut cache = MinorCache::new(pm);
            col_subs.iter().find_map(|cols| {
                let d = cache
                    .minor(rows, cols)
                    .expect("enumerated selections are valid");
                (!d.is_zero()).then_some(d)
            })
        });
        if let Some(minor) = bad_minor {
            let mut point = find_nonzero_point(&minor);
            for p in &params {
                point.entry(p.clone()).or_insert_with(Rational::zero);
            }
            let rank = rank_at(pm, &point);
            return Ok(RankCertificate::refuted(r, mode_name, point, rank));
        }
    }
    let upper = UpperEvidence::SymbolicMinors { minors: minors_checked };

    // Lower half: structural recognition first.
    if let Some(lower) = recognize_structural_lower(pm, r)? {
        return Ok(RankCertificate::certified(r, mode_name, upper, lower));
    }

    let (seed, trials) = match mode {
        CertifyMode::Structural => {
            return Ok(RankCertificate {
                claimed_rank: r,
                mode: mode_name.into(),
                verdict: Verdict::Inconclusive,
                upper: Some(upper),
                lower: None,
                counterexample: None,
            });
        }
        CertifyMode::Symbolic { seed, trials } => (seed, trials),
        CertifyMode::Randomized { .. } => unreachable!(),
    };

    // No structural shape: search for a rank break (grid, then samples),
    // otherwise certify on sampled lower evidence.
    let grid = GridSpec { cap: 50_000, ..GridSpec::default() };
    let mut found: Option<(Point, usize)> = None;
    let (grid_evals, _) = sparse_grid_search(&params, &grid.values, grid.cap, |pt| {
        let rank = rank_at(pm, pt);
        if rank != r {
            found = Some((pt.clone(), rank));
            false
        } else {
            true
        }
    });
    if let Some((point, rank)) = found {
        return Ok(RankCertificate::refuted(r, mode_name, point, rank));
    }
    let hit = (0..trials).into_par_iter().find_map_first(|i| {
        let mut rng = trial_rng(seed, i as u64);
        let point = random_point(&params, &mut rng);
        let rank = rank_at(pm, &point);
        (rank != r).then_some((point, rank))
    });
    Ok(match hit {
        Some((point, rank)) => RankCertificate::refuted(r, mode_name, point, rank),
        None => RankCertificate::certified(
            r,
            mode_name,
            upper,
            LowerEvidence::Sampled { points: grid_evals + trials, seed },
        ),
    })
}

/// Certifies that every member of the affine subspace has rank exactly r.
pub fn certify_constant_rank(
    s: &AffineSubspace,
    r: usize,
    mode: CertifyMode,
) -> Result<RankCertificate> {
    certify_parametric(&s.to_parametric(), r, mode)
}

/// Recognizes the leading r x r block as either a constant-determinant block
/// or a hyperbolic [[I, T'],[T, -I]] block certified through Cauchy-Binet.
fn recognize_structural_lower(pm: &PMatrix, r: usize) -> Result<Option<LowerEvidence>> {
    let sel: Vec<usize> = (0..r).collect();
    let det = sym_minor_det(pm, &sel, &sel)?;
    if let Some(c) = det.as_constant() {
        if c.is_zero() {
            return Ok(None);
        }
        return Ok(Some(LowerEvidence::UnitDet { rows: sel.clone(), cols: sel, det: c }));
    }
    for split in 0..=r {
        if !hyperbolic_block_matches(pm, split, r) {
            continue;
        }
        let neg = r - split;
        let t_rows: Vec<usize> = (split..r).collect();
        let t_cols: Vec<usize> = (0..split).collect();
        let t = pm.submatrix(&t_rows, &t_cols)?;
        let (rhs, squares) = one_plus_squared_minors(&t)?;
        let expected = if neg % 2 == 1 { -&rhs } else { rhs };
        if det != expected {
            return Err(Error::IdentityFails(
                "hyperbolic block matched but det != +-(1 + sum of squared minors)".into(),
            ));
        }
        return Ok(Some(LowerEvidence::CauchyBinet { rows: sel.clone(), cols: sel, squares }));
    }
    Ok(None)
}

/// Leading r x r block equals [[I_a, B'],[B, -I_(r-a)]] with polynomial B
/// mirrored across the diagonal.
fn hyperbolic_block_matches(pm: &PMatrix, a: usize, r: usize) -> bool {
    for i in 0..r {
        for j in 0..r {
            let e = &pm[(i, j)];
            let in_pos = i < a && j < a;
            let in_neg = i >= a && j >= a;
            if in_pos || in_neg {
                let expect = if i != j {
                    MPoly::zero()
                } else if in_pos {
                    MPoly::one()
                } else {
                    -MPoly::one()
                };
                if *e != expect {
                    return false;
                }
            } else if i < a && j >= a && *e != pm[(j, i)] {
                return false;
            }
        }
    }
    true
}

/// 1 + the sum of the squares of all square minors of t, and how many minors
/// went into the sum.
fn one_plus_squared_minors(t: &PMatrix) -> Result<(MPoly, usize)> {
    let mut cache = MinorCache::new(t);
    let mut sum = MPoly::one();
    let mut squares = 0;
    for k in 1..=t.rows().min(t.cols()) {
        for rows in combinations(t.rows(), k) {
            for cols in combinations(t.cols(), k) {
                let q = cache.minor(&rows, &cols)?;
                if !q.is_zero() {
                    sum = &sum + &(&q * &q);
                }
                squares += 1;
            }
        }
    }
    Ok((sum, squares))
}

/// The exact polynomial identity behind the invertibility of I + T'T.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CauchyBinetReport {
    pub t_rows: usize,
    pub t_cols: usize,
    /// det(I + T'T), certified equal to 1 + the sum of squared minors of T,
    /// hence >= 1 at every real point.
    pub det: MPoly,
    pub squares: usize,
}

/// Verifies det(I + T'T) = 1 + sum over all square minors M of T of M^2,
/// symbolically. A successful check certifies the determinant >= 1
/// everywhere over the reals.
pub fn cauchy_binet_certificate(t: &PMatrix) -> Result<CauchyBinetReport> {
    let gram = &PMatrix::identity(t.cols()) + &(&t.transpose() * t);
    let det = poly_det(&gram)?;
    let (rhs, squares) = one_plus_squared_minors(t)?;
    if det != rhs {
        return Err(Error::IdentityFails(
            "det(I + T'T) != 1 + sum of squared minors of T".into(),
        ));
    }
    Ok(CauchyBinetReport {
        t_rows: t.rows(),
        t_cols: t.cols(),
        det,
        squares,
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BlockSquareReport {
    pub t_rows: usize,
    pub t_cols: usize,
    /// Order of the block matrix [[I, T],[T', -I]] whose square was checked.
    pub order: usize,
}

/// Verifies, as an exact polynomial matrix identity, that
/// [[I, T],[T', -I]]^2 = [[I + TT', 0],[0, I + T'T]].
pub fn lemma1_block_square(t: &PMatrix) -> Result<BlockSquareReport> {
    let (m, n) = (t.rows(), t.cols());
    let tt = t.transpose();
    let big = Matrix::from_blocks(&PMatrix::identity(m), t, &tt, &-(&PMatrix::identity(n)))?;
    let squared = &big * &big;
    let expected = Matrix::from_blocks(
        &(&PMatrix::identity(m) + &(t * &tt)),
        &PMatrix::zero(m, n),
        &PMatrix::zero(n, m),
        &(&PMatrix::identity(n) + &(&tt * t)),
    )?;
    if squared != expected {
        return Err(Error::IdentityFails(
            "[[I, T],[T', -I]]^2 != diag(I + TT', I + T'T)".into(),
        ));
    }
    Ok(BlockSquareReport { t_rows: m, t_cols: n, order: m + n })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RootWindow {
    #[serde(with = "serde_rational")]
    pub lo: Rational,
    #[serde(with = "serde_rational")]
    pub hi: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Lemma2Outcome {
    /// det(I + sA) has a real root; an isolating interval is returned.
    Exists { window: RootWindow, distinct_roots: usize },
    NotExists,
}

/// Decides, by Sturm counting on det(I + sA), whether some real s makes
/// I + sA singular. For symmetric A this happens exactly when A != 0.
pub fn lemma2_root_exists(a: &QMatrix) -> Result<Lemma2Outcome> {
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = a.rows();
    let s = MPoly::var("s");
    let pencil = PMatrix::from_fn(n, n, |i, j| {
        let c = s.scale(&a[(i, j)]);
        if i == j {
            &MPoly::one() + &c
        } else {
            c
        }
    });
    let det = poly_det(&pencil)?;
    let u = UPoly::from_mpoly(&det, "s")?;
    let distinct_roots = u.sturm_real_root_count(RootInterval::FullLine)?;
    if distinct_roots == 0 {
        return Ok(Lemma2Outcome::NotExists);
    }
    let (lo, hi) = u.isolate_root(&default_isolation_width())?;
    Ok(Lemma2Outcome::Exists {
        window: RootWindow { lo, hi },
        distinct_roots,
    })
}

/// Exact determinant of the bordered matrix [[A, x],[x', 0]] for invertible
/// symmetric A. Equals -x' adj(A) x, so it vanishes exactly when x is
/// isotropic for adj(A); in particular it is zero at x = 0.
pub fn lemma3_bordered_det(a: &QMatrix, x: &[Rational]) -> Result<Rational> {
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = a.rows();
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} bordering a {n}x{n} matrix",
            x.len()
        )));
    }
    if a.det()?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    let bordered = QMatrix::from_fn(n + 1, n + 1, |i, j| match (i == n, j == n) {
        (false, false) => a[(i, j)].clone(),
        (false, true) => x[i].clone(),
        (true, false) => x[j].clone(),
        (true, true) => Rational::zero(),
    });
    bordered.det()
}

/// Exact dimension of span(v) ∩ span(all pattern bases), by stack-and-rank:
/// dim V + dim P - rank([V; P]).
pub fn intersection_check(v_basis: &[QMatrix], pattern_bases: &[Vec<QMatrix>]) -> Result<usize> {
    let others: Vec<QMatrix> = pattern_bases.iter().flatten().cloned().collect();
    let mut all = v_basis.to_vec();
    all.extend(others.iter().cloned());
    let total = span_rank(&all)?;
    let dv = span_rank(v_basis)?;
    let dp = span_rank(&others)?;
    Ok(dv + dp - total)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProbeOutcome {
    /// A member of S + span(direction) with rank != r; the point includes
    /// the direction coefficient "u".
    Broken { point: Point, rank: usize },
    /// No rational break found. Slices where a real (but irrational) break
    /// was detected by Sturm counting are tallied.
    NotFalsified {
        evaluations: usize,
        irrational_break_slices: usize,
    },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct DirectionProbe {
    pub label: String,
    pub outcome: ProbeOutcome,
}

/// Matrix units outside the span of the subspace's basis: the default probe
/// directions. Labels are 1-based for readability.
pub fn default_probe_directions(s: &AffineSubspace) -> Result<Vec<(String, QMatrix)>> {
    let (m, n) = (s.rows(), s.cols());
    let base_rank = span_rank(s.basis())?;
    let mut out = Vec::new();
    let mut push_if_outside = |label: String, u: QMatrix| -> Result<()> {
        let mut all = s.basis().to_vec();
        all.push(u.clone());
        if span_rank(&all)? > base_rank {
            out.push((label, u));
        }
        Ok(())
    };
    if s.is_symmetric_space() {
        for i in 0..n {
            for j in i..n {
                let label = if i == j {
                    format!("E({},{})", i + 1, j + 1)
                } else {
                    format!("E({},{})+E({},{})", i + 1, j + 1, j + 1, i + 1)
                };
                push_if_outside(label, matrix_unit(n, n, i, j, true)?)?;
            }
        }
    } else {
        for i in 0..m {
            for j in 0..n {
                push_if_outside(
                    format!("E({},{})", i + 1, j + 1),
                    matrix_unit(m, n, i, j, false)?,
                )?;
            }
        }
    }
    Ok(out)
}

/// For each direction E outside the family's span, searches S + span(E) for
/// a member of rank != r: a sparse-first grid pass, then root-driven search
/// on one-parameter slices. Absence of a witness is reported, not an error.
pub fn maximality_probe(
    s: &AffineSubspace,
    r: usize,
    directions: Option<Vec<(String, QMatrix)>>,
    grid: &GridSpec,
) -> Result<Vec<DirectionProbe>> {
    let directions = match directions {
        Some(d) => d,
        None => default_probe_directions(s)?,
    };
    let pm = s.to_parametric();
    directions
        .into_par_iter()
        .map(|(label, dir)| {
            if dir.rows() != s.rows() || dir.cols() != s.cols() {
                return Err(Error::ShapeMismatch(format!(
                    "direction {label} does not match the family shape"
                )));
            }
            let u = MPoly::var("u");
            let ext = &pm + &dir.map(|c| u.scale(c));
            let outcome = probe_direction(&ext, r, grid)?;
            Ok(DirectionProbe { label, outcome })
        })
        .collect()
}

fn probe_direction(ext: &PMatrix, r: usize, grid: &GridSpec) -> Result<ProbeOutcome> {
    let params: Vec<String> = ext.params().into_iter().collect();
    let mut broken: Option<(Point, usize)> = None;
    let (evaluations, _) = sparse_grid_search(&params, &grid.values, grid.cap, |pt| {
        let rank = rank_at(ext, pt);
        if rank != r {
            broken = Some((pt.clone(), rank));
            false
        } else {
            true
        }
    });
    if let Some((point, rank)) = broken {
        return Ok(ProbeOutcome::Broken { point, rank });
    }
    let mut irrational_break_slices = 0;
    for free in &params {
        match probe_slice(ext, r, free, &params)? {
            SliceOutcome::Broken { point, rank } => {
                return Ok(ProbeOutcome::Broken { point, rank })
            }
            SliceOutcome::IrrationalBreak => irrational_break_slices += 1,
            SliceOutcome::Nothing => {}
        }
    }
    Ok(ProbeOutcome::NotFalsified { evaluations, irrational_break_slices })
}

enum SliceOutcome {
    Broken { point: Point, rank: usize },
    IrrationalBreak,
    Nothing,
}

/// One-parameter slice through the background point: all parameters except
/// `free` pinned to zero. Rank rises are found through a nonvanishing
/// (r+1)-minor; rank drops through rational common roots of the r-minors,
/// with Sturm counting reporting real-but-irrational drops.
fn probe_slice(ext: &PMatrix, r: usize, free: &str, params: &[String]) -> Result<SliceOutcome> {
    let zeros: BTreeMap<String, Rational> = params
        .iter()
        .filter(|p| p.as_str() != free)
        .map(|p| (p.clone(), Rational::zero()))
        .collect();
    let slice = ext.substitute(&zeros);
    let max_rank = ext.rows().min(ext.cols());

    let full_point = |value: Rational| {
        let mut point = Point(zeros.clone());
        point.insert(free.to_string(), value);
        point
    };

    if r < max_rank {
        for rows in combinations(ext.rows(), r + 1) {
            for cols in combinations(ext.cols(), r + 1) {
                let q = sym_minor_det(&slice, &rows, &cols)?;
                if q.is_zero() {
                    continue;
                }
                let partial = find_nonzero_point(&q);
                let value = partial.get(free).cloned().unwrap_or_else(Rational::zero);
                let point = full_point(value);
                let rank = rank_at(ext, &point);
                debug_assert!(rank > r);
                return Ok(SliceOutcome::Broken { point, rank });
            }
        }
    }

    if r == 0 {
        return Ok(SliceOutcome::Nothing); // rank cannot drop below zero
    }
    let mut gcd: Option<UPoly> = None;
    'outer: for rows in combinations(ext.rows(), r) {
        for cols in combinations(ext.cols(), r) {
            let q = sym_minor_det(&slice, &rows, &cols)?;
            let uq = UPoly::from_mpoly(&q, free)?;
            gcd = Some(match gcd {
                None => uq,
                Some(g) => g.gcd(&uq),
            });
            if let Some(g) = &gcd {
                if g.degree() == Some(0) && !g.is_zero() {
                    break 'outer; // coprime minors: no common root
                }
            }
        }
    }
    let g = match gcd {
        // no r-minors at all, or every r-minor vanishes identically on the
        // slice; the grid pass already scanned it
        None => return Ok(SliceOutcome::Nothing),
        Some(g) if g.is_zero() || g.degree() == Some(0) => return Ok(SliceOutcome::Nothing),
        Some(g) => g,
    };
    let roots = rational_roots(&g);
    for root in &roots {
        let point = full_point(root.clone());
        let rank = rank_at(ext, &point);
        if rank != r {
            return Ok(SliceOutcome::Broken { point, rank });
        }
    }
    if g.sturm_real_root_count(RootInterval::FullLine)? > roots.len() {
        return Ok(SliceOutcome::IrrationalBreak);
    }
    Ok(SliceOutcome::Nothing)
}

/// Divisors of |x|, or None when |x| is too large to enumerate quickly.
fn divisors(x: &BigInt) -> Option<Vec<BigInt>> {
    let limit = BigInt::from(1_000_000_000_000u64);
    let ax = x.abs();
    if ax > limit || ax.is_zero() {
        return None;
    }
    let v: u64 = ax.to_string().parse().ok()?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d != v / d {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

/// All rational roots of p, by the rational root theorem on the
/// denominator-cleared coefficients (best-effort small-candidate scan when
/// the edge coefficients are too large to factor).
pub fn rational_roots(p: &UPoly) -> Vec<Rational> {
    if p.is_zero() || p.degree() == Some(0) {
        return Vec::new();
    }
    let mut roots = Vec::new();
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        let d = c.denom();
        let g = num_integer::Integer::gcd(&lcm, d);
        lcm = &lcm / &g * d;
    }
    let ints: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(Rational::zero());
    }
    let a0 = &ints[low];
    let lead = ints.last().expect("nonzero polynomial");
    let candidates: Vec<Rational> = match (divisors(a0), divisors(lead)) {
        (Some(nums), Some(dens)) => {
            let mut out = Vec::new();
            for num in &nums {
                for den in &dens {
                    let q = Rational::new(num.clone(), den.clone());
                    out.push(q.clone());
                    out.push(-q);
                }
            }
            out
        }
        _ => (-50..=50).filter(|v| *v != 0).map(rat).collect(),
    };
    for c in candidates {
        if !roots.contains(&c) && p.eval(&c).is_zero() {
            roots.push(c);
        }
    }
    roots.sort();
    roots
}

/// Searches a family for a member of rank != r: seeded random samples, then
/// a sparse grid pass. A genuinely constant-rank family returns None.
pub fn falsify_subspace(
    s: &AffineSubspace,
    r: usize,
    seed: u64,
    samples: usize,
) -> Result<Option<Counterexample>> {
    let pm = s.to_parametric();
    let params: Vec<String> = pm.params().into_iter().collect();
    for i in 0..samples {
        let mut rng = trial_rng(seed, i as u64);
        let point = random_point(&params, &mut rng);
        let rank = rank_at(&pm, &point);
        if rank != r {
            return Ok(Some(Counterexample { point, rank }));
        }
    }
    let grid = GridSpec { cap: 2_000, ..GridSpec::default() };
    let mut found = None;
    sparse_grid_search(&params, &grid.values, grid.cap, |pt| {
        let rank = rank_at(&pm, pt);
        if rank != r {
            found = Some(Counterexample { point: pt.clone(), rank });
            false
        } else {
            true
        }
    });
    Ok(found)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FalsifyStats {
    pub rows: usize,
    pub cols: usize,
    pub claimed_rank: usize,
    pub symmetric: bool,
    pub dim: usize,
    pub seed: u64,
    pub trials: usize,
    pub falsified: usize,
    /// Trial indices where no rank break was found (expected empty for
    /// over-dimensional families).
    pub unfalsified: Vec<usize>,
}

fn random_member_matrix<R: rand::Rng>(
    m: usize,
    n: usize,
    symmetric: bool,
    rng: &mut R,
) -> QMatrix {
    if symmetric {
        let mut out = QMatrix::zero(n, n);
        for i in 0..n {
            for j in i..n {
                let v = small_random_rational(rng);
                out.set(i, j, v.clone());
                out.set(j, i, v);
            }
        }
        out
    } else {
        QMatrix::from_fn(m, n, |_, _| small_random_rational(rng))
    }
}

/// For `trials` random affine subspaces of the stated dimension, anchored at
/// the canonical rank-r base so each family contains a rank-r point, count
/// how many admit a rank-breaking point.
pub fn falsify_random_overdim(
    m: usize,
    n: usize,
    r: usize,
    symmetric: bool,
    dim: usize,
    seed: u64,
    trials: usize,
) -> Result<FalsifyStats> {
    if symmetric && m != n {
        return Err(Error::BadParams("symmetric families must be square".into()));
    }
    if r > m.min(n) {
        return Err(Error::BadRank { claimed: r, max: m.min(n) });
    }
    let ambient = if symmetric { n * (n + 1) / 2 } else { m * n };
    if dim > ambient {
        return Err(Error::BadParams(format!(
            "dimension {dim} exceeds the ambient dimension {ambient}"
        )));
    }
    let base = if symmetric {
        let diag: Vec<Rational> = (0..n)
            .map(|i| {
                if i < r.div_ceil(2) {
                    rat(1)
                } else if i < r {
                    rat(-1)
                } else {
                    rat(0)
                }
            })
            .collect();
        QMatrix::diagonal(&diag)
    } else {
        QMatrix::from_fn(m, n, |i, j| if i == j && i < r { rat(1) } else { rat(0) })
    };
    let results: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<bool> {
            let mut rng = trial_rng(seed, t as u64);
            let mut basis: Vec<QMatrix> = Vec::new();
            let mut attempts = 0;
            while basis.len() < dim {
                attempts += 1;
                if attempts > 100 * dim + 100 {
                    return Err(Error::BadParams(
                        "failed to draw an independent random basis".into(),
                    ));
                }
                basis.push(random_member_matrix(m, n, symmetric, &mut rng));
                if span_rank(&basis)? < basis.len() {
                    basis.pop();
                }
            }
            let family = AffineSubspace::new(symmetric, base.clone(), basis)?;
            let found = falsify_subspace(&family, r, seed.wrapping_add(t as u64), 64)?;
            Ok(found.is_some())
        })
        .collect::<Result<Vec<bool>>>()?;
    let falsified = results.iter().filter(|&&b| b).count();
    let unfalsified = results
        .iter()
        .enumerate()
        .filter(|(_, &b)| !b)
        .map(|(i, _)| i)
        .collect();
    Ok(FalsifyStats {
        rows: m,
        cols: n,
        claimed_rank: r,
        symmetric,
        dim,
        seed,
        trials,
        falsified,
        unfalsified,
    })
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SignatureSample {
    pub point: Point,
    pub signature: Signature,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SignatureCertificate {
    pub expected: Signature,
    pub samples: usize,
    pub seed: u64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<SignatureSample>,
    pub rank_certificate: RankCertificate,
}

/// Signature sampled at `trials` random rational points must equal
/// (p, nu, n-p-nu) everywhere, combined with constant-rank certification at
/// r = p + nu for the rank half.
pub fn certify_constant_signature(
    s: &AffineSubspace,
    p: usize,
    nu: usize,
    trials: usize,
    seed: u64,
) -> Result<SignatureCertificate> {
    if !s.is_symmetric_space() {
        return Err(Error::NotSymmetric);
    }
    let n = s.rows();
    if p + nu > n {
        return Err(Error::BadParams(format!(
            "need p + nu <= n, got p={p}, nu={nu}, n={n}"
        )));
    }
    let expected = Signature {
        positive: p,
        negative: nu,
        zero: n - p - nu,
    };
    let pm = s.to_parametric();
    let params: Vec<String> = pm.params().into_iter().collect();
    let bad = (0..trials).into_par_iter().find_map_first(|i| {
        let mut rng = trial_rng(seed, i as u64);
        let point = random_point(&params, &mut rng);
        let member = pm
            .eval_point(&point)
            .expect("search points assign every family parameter");
        let sig = signature(&member).expect("members of a symmetric family are symmetric");
        (sig != expected).then_some(SignatureSample { point, signature: sig })
    });
    let rank_certificate =
        certify_parametric(&pm, p + nu, CertifyMode::Symbolic { seed, trials: 32 })?;
    let (verdict, counterexample) = match bad {
        Some(sample) => (Verdict::Refuted, Some(sample)),
        None => (rank_certificate.verdict, None),
    };
    Ok(SignatureCertificate {
        expected,
        samples: trials,
        seed,
        verdict,
        counterexample,
        rank_certificate,
    })
}
