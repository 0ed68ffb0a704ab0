//! The affine-subspace data model, the block witness constructions, the
//! proof pattern spaces Z/U/W/T, and the closed-form dimension counts.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::matrix::{matrix_unit, span_rank, PMatrix, QMatrix};
use crate::mpoly::MPoly;
use crate::scalar::rat;
use crate::{Error, Result};

/// An affine subspace of matrices: base + span(basis). The basis matrices
/// are linearly independent as vectors; symmetric subspaces are square with
/// every member symmetric.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineSubspace {
    symmetric: bool,
    base: QMatrix,
    basis: Vec<QMatrix>,
}

impl AffineSubspace {
    pub fn new(symmetric: bool, base: QMatrix, basis: Vec<QMatrix>) -> Result<Self> {
        let (m, n) = (base.rows(), base.cols());
        if basis.iter().any(|b| b.rows() != m || b.cols() != n) {
            return Err(Error::ShapeMismatch(
                "basis matrices must match the base shape".into(),
            ));
        }
        if symmetric && (!base.is_symmetric() || basis.iter().any(|b| !b.is_symmetric())) {
            return Err(Error::NotSymmetric);
        }
        if span_rank(&basis)? != basis.len() {
            return Err(Error::BadParams(
                "basis matrices are linearly dependent".into(),
            ));
        }
        Ok(Self { symmetric, base, basis })
    }

    pub fn rows(&self) -> usize {
        self.base.rows()
    }

    pub fn cols(&self) -> usize {
        self.base.cols()
    }

    pub fn is_symmetric_space(&self) -> bool {
        self.symmetric
    }

    pub fn base(&self) -> &QMatrix {
        &self.base
    }

    pub fn basis(&self) -> &[QMatrix] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Parameter names t1..tk, one per basis matrix.
    pub fn param_names(&self) -> Vec<String> {
        (1..=self.basis.len()).map(|i| format!("t{i}")).collect()
    }

    /// base + sum of t_i * basis_i with fresh parameters t1..tk; the
    /// specializations of the result are exactly the members of the space.
    pub fn to_parametric(&self) -> PMatrix {
        let mut acc = PMatrix::lift(&self.base);
        for (name, b) in self.param_names().iter().zip(&self.basis) {
            let t = MPoly::var(name);
            acc = &acc + &b.map(|c| t.scale(c));
        }
        acc
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    m: usize,
    n: usize,
    symmetric: bool,
    base: QMatrix,
    basis: Vec<QMatrix>,
}

impl Serialize for AffineSubspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRepr {
            m: self.rows(),
            n: self.cols(),
            symmetric: self.symmetric,
            base: self.base.clone(),
            basis: self.basis.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineSubspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(d)?;
        if repr.base.rows() != repr.m || repr.base.cols() != repr.n {
            return Err(serde::de::Error::custom(
                "declared m/n do not match the base matrix",
            ));
        }
        AffineSubspace::new(repr.symmetric, repr.base, repr.basis).map_err(serde::de::Error::custom)
    }
}

fn sym_base(n: usize, p: usize, nu: usize) -> QMatrix {
    let mut diag = vec![rat(0); n];
    for (i, d) in diag.iter_mut().enumerate() {
        if i < p {
            *d = rat(1);
        } else if i < p + nu {
            *d = rat(-1);
        }
    }
    QMatrix::diagonal(&diag)
}

/// The symmetric block witness: base diag(1 x ceil(r/2), -1 x floor(r/2),
/// 0 x (n-r)); basis = symmetric units on the block coupling the positive
/// rows with the negative rows, then symmetric units coupling rows 1..r with
/// rows r+1..n, both row-major. Dimension r(n-r) + floor(r^2/4).
pub fn construct_sym_witness(n: usize, r: usize) -> Result<AffineSubspace> {
    if r > n {
        return Err(Error::BadParams(format!("need r <= n, got r={r}, n={n}")));
    }
    construct_signature_witness(n, r.div_ceil(2), r / 2)
}

/// The signature block witness: base diag(1 x p, -1 x nu, 0); basis =
/// symmetric units coupling the positive block with the negative block
/// (p*nu of them), then symmetric units coupling rows 1..p+nu with rows
/// p+nu+1..n. Dimension p*nu + (p+nu)(n-p-nu).
pub fn construct_signature_witness(n: usize, p: usize, nu: usize) -> Result<AffineSubspace> {
    let r = p + nu;
    if r > n {
        return Err(Error::BadParams(format!(
            "need p + nu <= n, got p={p}, nu={nu}, n={n}"
        )));
    }
    let base = sym_base(n, p, nu);
    let mut basis = Vec::new();
    for i in 0..p {
        for j in p..r {
            basis.push(matrix_unit(n, n, i, j, true)?);
        }
    }
    for i in 0..r {
        for j in r..n {
            basis.push(matrix_unit(n, n, i, j, true)?);
        }
    }
    AffineSubspace::new(true, base, basis)
}

/// The rectangular witness: base J (ones on the first r diagonal entries);
/// basis = plain units at the strictly-upper positions of the first r rows,
/// row-major. Dimension rn - r(r+1)/2.
pub fn construct_rect_witness(m: usize, n: usize, r: usize) -> Result<AffineSubspace> {
    if !(r <= m && m <= n) {
        return Err(Error::BadParams(format!(
            "need r <= m <= n, got r={r}, m={m}, n={n}"
        )));
    }
    let base = QMatrix::from_fn(m, n, |i, j| {
        if i == j && i < r {
            rat(1)
        } else {
            rat(0)
        }
    });
    let mut basis = Vec::new();
    for i in 0..r {
        for j in i + 1..n {
            basis.push(matrix_unit(m, n, i, j, false)?);
        }
    }
    AffineSubspace::new(false, base, basis)
}

/// A coordinate span of matrix units: positions (i, j), each spanning E_ij,
/// or E_ij + E_ji when mirrored (diagonal positions stay single units).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PatternSpace {
    rows: usize,
    cols: usize,
    mirrored: bool,
    positions: BTreeSet<(usize, usize)>,
}

impl PatternSpace {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn mirrored(&self) -> bool {
        self.mirrored
    }

    pub fn positions(&self) -> &BTreeSet<(usize, usize)> {
        &self.positions
    }

    pub fn dim(&self) -> usize {
        self.positions.len()
    }

    pub fn basis(&self) -> Vec<QMatrix> {
        self.positions
            .iter()
            .map(|&(i, j)| {
                matrix_unit(self.rows, self.cols, i, j, self.mirrored)
                    .expect("pattern positions are validated in range")
            })
            .collect()
    }
}

/// The proof spaces, by name. All indices here are 0-based.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PatternKind {
    /// Symmetric pairs within the positive block: (i, j), i <= j < p.
    SymZ { n: usize, p: usize },
    /// Symmetric pairs within the negative block: p <= i <= j < r.
    SymU { n: usize, p: usize, r: usize },
    /// Symmetric pairs within the kernel block: r <= i <= j < n.
    SymW { n: usize, r: usize },
    /// Diagonal positions plus off-diagonal positions avoiding the first r
    /// rows and columns, in an m x n rectangle.
    RectZ { m: usize, n: usize, r: usize },
    /// Mirrored pairs {i, j}, i < j < m (within the first m columns), with
    /// i < r: the symmetric-paired space of the rectangular bound.
    RectT { m: usize, n: usize, r: usize },
}

pub fn pattern_space(kind: PatternKind) -> Result<PatternSpace> {
    let bad = |msg: String| Err(Error::BadParams(msg));
    let mut positions = BTreeSet::new();
    match kind {
        PatternKind::SymZ { n, p } => {
            if p > n {
                return bad(format!("sym-Z needs p <= n, got p={p}, n={n}"));
            }
            for i in 0..p {
                for j in i..p {
                    positions.insert((i, j));
                }
            }
            Ok(PatternSpace { rows: n, cols: n, mirrored: true, positions })
        }
        PatternKind::SymU { n, p, r } => {
            if !(p <= r && r <= n) {
                return bad(format!("sym-U needs p <= r <= n, got p={p}, r={r}, n={n}"));
            }
            for i in p..r {
                for j in i..r {
                    positions.insert((i, j));
                }
            }
            Ok(PatternSpace { rows: n, cols: n, mirrored: true, positions })
        }
        PatternKind::SymW { n, r } => {
            if r > n {
                return bad(format!("sym-W needs r <= n, got r={r}, n={n}"));
            }
            for i in r..n {
                for j in i..n {
                    positions.insert((i, j));
                }
            }
            Ok(PatternSpace { rows: n, cols: n, mirrored: true, positions })
        }
        PatternKind::RectZ { m, n, r } => {
            if !(r <= m && m <= n) {
                return bad(format!("rect-Z needs r <= m <= n, got r={r}, m={m}, n={n}"));
            }
            for i in 0..m {
                positions.insert((i, i));
            }
            for i in r..m {
                for j in r..n {
                    if i != j {
                        positions.insert((i, j));
                    }
                }
            }
            Ok(PatternSpace { rows: m, cols: n, mirrored: false, positions })
        }
        PatternKind::RectT { m, n, r } => {
            if !(r <= m && m <= n) {
                return bad(format!("rect-T needs r <= m <= n, got r={r}, m={m}, n={n}"));
            }
            for i in 0..r.min(m) {
                for j in i + 1..m {
                    positions.insert((i, j));
                }
            }
            Ok(PatternSpace { rows: m, cols: n, mirrored: true, positions })
        }
    }
}

/// The closed-form dimension values.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FormulaKind {
    /// r(n-r) + floor(r^2/4), for r <= n.
    ASym { n: usize, r: usize },
    /// rn - r(r+1)/2, for r <= m <= n.
    ARect { m: usize, n: usize, r: usize },
    /// p*nu + (p+nu)(n-p-nu), for p+nu <= n.
    ASig { n: usize, p: usize, nu: usize },
    /// The two-triangular-block family dimension, for k <= r <= m <= n.
    HzDim { m: usize, n: usize, r: usize, k: usize },
}

pub fn formula(kind: FormulaKind) -> Result<i64> {
    match kind {
        FormulaKind::ASym { n, r } => {
            if r > n {
                return Err(Error::BadParams(format!("a_sym needs r <= n, got r={r}, n={n}")));
            }
            let (n, r) = (n as i64, r as i64);
            Ok(r * (n - r) + r * r / 4)
        }
        FormulaKind::ARect { m, n, r } => {
            if !(r <= m && m <= n) {
                return Err(Error::BadParams(format!(
                    "a_rect needs r <= m <= n, got r={r}, m={m}, n={n}"
                )));
            }
            let (n, r) = (n as i64, r as i64);
            Ok(r * n - r * (r + 1) / 2)
        }
        FormulaKind::ASig { n, p, nu } => {
            if p + nu > n {
                return Err(Error::BadParams(format!(
                    "a_sig needs p + nu <= n, got p={p}, nu={nu}, n={n}"
                )));
            }
            let (n, p, nu) = (n as i64, p as i64, nu as i64);
            Ok(p * nu + (p + nu) * (n - p - nu))
        }
        FormulaKind::HzDim { m, n, r, k } => crate::aci::hz_family_dim(m, n, r, k),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::signature;

    #[test]
    fn sym_witness_small_cases() {
        // (n=3, r=2): base diag(1,-1,0); units at (0,1), (0,2), (1,2); dim 3
        let w = construct_sym_witness(3, 2).unwrap();
        assert_eq!(w.base(), &sym_base(3, 1, 1));
        assert_eq!(w.dim(), 3);
        let expected = [
            matrix_unit(3, 3, 0, 1, true).unwrap(),
            matrix_unit(3, 3, 0, 2, true).unwrap(),
            matrix_unit(3, 3, 1, 2, true).unwrap(),
        ];
        assert_eq!(w.basis(), &expected);

        // (n=2, r=2): the one-parameter family of the 2x2 block
        let w = construct_sym_witness(2, 2).unwrap();
        assert_eq!(w.dim(), 1);
        assert_eq!(w.basis()[0], matrix_unit(2, 2, 0, 1, true).unwrap());

        // (n=3, r=3): odd rank, base diag(1,1,-1), two coupling units
        let w = construct_sym_witness(3, 3).unwrap();
        assert_eq!(w.base(), &sym_base(3, 2, 1));
        assert_eq!(w.dim(), 2);
        assert_eq!(
            w.basis(),
            &[
                matrix_unit(3, 3, 0, 2, true).unwrap(),
                matrix_unit(3, 3, 1, 2, true).unwrap(),
            ]
        );

        assert!(construct_sym_witness(2, 3).is_err());
        // degenerate r = 0: the singleton {0}
        let w = construct_sym_witness(4, 0).unwrap();
        assert_eq!(w.dim(), 0);
        assert!(w.base().is_zero());
    }

    #[test]
    fn rect_witness_small_cases() {
        let w = construct_rect_witness(2, 3, 2).unwrap();
        assert_eq!(w.dim(), 3);
        // positions (0,1), (0,2), (1,2) row-major
        assert_eq!(
            w.basis(),
            &[
                matrix_unit(2, 3, 0, 1, false).unwrap(),
                matrix_unit(2, 3, 0, 2, false).unwrap(),
                matrix_unit(2, 3, 1, 2, false).unwrap(),
            ]
        );

        // m = n = r: strictly upper triangular freedom
        let w = construct_rect_witness(4, 4, 4).unwrap();
        assert_eq!(w.dim(), 4 * 3 / 2);

        // (1, 4, 1): the full free row
        let w = construct_rect_witness(1, 4, 1).unwrap();
        assert_eq!(w.dim(), 3);

        assert!(construct_rect_witness(3, 2, 1).is_err());
        assert!(construct_rect_witness(2, 3, 3).is_err());
    }

    #[test]
    fn signature_witness_small_cases() {
        let w = construct_signature_witness(3, 1, 1).unwrap();
        assert_eq!(w.dim(), 3);

        // definite case: no off-diagonal freedom, the singleton {I_2}
        let w = construct_signature_witness(2, 2, 0).unwrap();
        assert_eq!(w.dim(), 0);
        assert_eq!(w.base(), &QMatrix::identity(2));

        let w = construct_signature_witness(4, 1, 2).unwrap();
        assert_eq!(w.dim(), 2 + 3);

        assert!(construct_signature_witness(2, 2, 1).is_err());
    }

    #[test]
    fn witness_dims_match_formulas_and_bases_have_the_split_signature() {
        for n in 1..=8usize {
            for r in 0..=n {
                let w = construct_sym_witness(n, r).unwrap();
                let f = formula(FormulaKind::ASym { n, r }).unwrap();
                assert_eq!(w.dim() as i64, f, "sym ({n}, {r})");
                let sig = signature(w.base()).unwrap();
                assert_eq!(
                    (sig.positive, sig.negative, sig.zero),
                    (r.div_ceil(2), r / 2, n - r)
                );
                for b in w.basis() {
                    assert!(b.is_symmetric());
                }
            }
        }
        for n in 1..=8usize {
            for m in 1..=n {
                for r in 0..=m {
                    let w = construct_rect_witness(m, n, r).unwrap();
                    let f = formula(FormulaKind::ARect { m, n, r }).unwrap();
                    assert_eq!(w.dim() as i64, f, "rect ({m}, {n}, {r})");
                }
            }
        }
        for n in 1..=6usize {
            for p in 0..=n {
                for nu in 0..=(n - p) {
                    let w = construct_signature_witness(n, p, nu).unwrap();
                    let f = formula(FormulaKind::ASig { n, p, nu }).unwrap();
                    assert_eq!(w.dim() as i64, f, "sig ({n}, {p}, {nu})");
                }
            }
        }
    }

    #[test]
    fn formula_examples() {
        assert_eq!(formula(FormulaKind::ASym { n: 4, r: 3 }).unwrap(), 5);
        assert_eq!(formula(FormulaKind::ARect { m: 3, n: 5, r: 2 }).unwrap(), 7);
        assert_eq!(formula(FormulaKind::ASig { n: 3, p: 1, nu: 1 }).unwrap(), 3);
        assert_eq!(
            formula(FormulaKind::HzDim { m: 3, n: 5, r: 2, k: 2 }).unwrap(),
            7
        );
        assert!(formula(FormulaKind::ASym { n: 2, r: 3 }).is_err());
        assert!(formula(FormulaKind::ARect { m: 3, n: 2, r: 1 }).is_err());
    }

    #[test]
    fn the_two_published_rect_forms_agree() {
        for n in 1..=8i64 {
            for r in 0..=n {
                assert_eq!(r * (n - r) + r * (r - 1) / 2, r * n - r * (r + 1) / 2);
            }
        }
    }

    #[test]
    fn pattern_space_examples() {
        // sym-W with r=2, n=3: only position (2,2)
        let w = pattern_space(PatternKind::SymW { n: 3, r: 2 }).unwrap();
        assert_eq!(w.positions().iter().copied().collect::<Vec<_>>(), vec![(2, 2)]);

        // rect-Z with r=1 in 2x2: the diagonal
        let z = pattern_space(PatternKind::RectZ { m: 2, n: 2, r: 1 }).unwrap();
        assert_eq!(
            z.positions().iter().copied().collect::<Vec<_>>(),
            vec![(0, 0), (1, 1)]
        );

        // sym-Z with p=0 is empty
        let z0 = pattern_space(PatternKind::SymZ { n: 3, p: 0 }).unwrap();
        assert_eq!(z0.dim(), 0);
        assert!(z0.basis().is_empty());
    }

    #[test]
    fn pattern_space_dimension_counts() {
        for n in 1..=6usize {
            for r in 0..=n {
                for p in 0..=r {
                    let z = pattern_space(PatternKind::SymZ { n, p }).unwrap();
                    let u = pattern_space(PatternKind::SymU { n, p, r }).unwrap();
                    let w = pattern_space(PatternKind::SymW { n, r }).unwrap();
                    assert_eq!(z.dim(), p * (p + 1) / 2);
                    assert_eq!(u.dim(), (r - p) * (r - p + 1) / 2);
                    assert_eq!(w.dim(), (n - r) * (n - r + 1) / 2);
                    // ambient count: dim S(n) - dim(Z+U+W) = p(r-p) + r(n-r)
                    let ambient = n * (n + 1) / 2;
                    assert_eq!(
                        ambient - z.dim() - u.dim() - w.dim(),
                        p * (r - p) + r * (n - r)
                    );
                }
            }
        }
    }

    #[test]
    fn rect_t_counts_match_the_tight_bound() {
        // dim Z + dim T + dim V = mn exactly
        for n in 1..=6usize {
            for m in 1..=n {
                for r in 0..=m {
                    let z = pattern_space(PatternKind::RectZ { m, n, r }).unwrap();
                    let t = pattern_space(PatternKind::RectT { m, n, r }).unwrap();
                    let v = construct_rect_witness(m, n, r).unwrap();
                    assert_eq!(z.dim() + t.dim() + v.dim(), m * n, "({m},{n},{r})");
                }
            }
        }
    }

    #[test]
    fn hz_dim_maximized_at_k_equals_r() {
        for n in 1..=8usize {
            for m in 1..=n {
                for r in 0..=m {
                    let at_r = formula(FormulaKind::HzDim { m, n, r, k: r }).unwrap();
                    let a_rect = formula(FormulaKind::ARect { m, n, r }).unwrap();
                    assert_eq!(at_r, a_rect);
                    let mut values = Vec::new();
                    for k in 0..=r {
                        let v = formula(FormulaKind::HzDim { m, n, r, k }).unwrap();
                        assert!(v <= at_r);
                        values.push(v);
                    }
                    if m == n {
                        assert!(values.windows(2).all(|w| w[0] == w[1]));
                    }
                }
            }
        }
    }

    #[test]
    fn to_parametric_examples() {
        let w = construct_sym_witness(2, 2).unwrap();
        let pm = w.to_parametric();
        let t1 = MPoly::var("t1");
        assert_eq!(pm[(0, 0)], MPoly::one());
        assert_eq!(pm[(0, 1)], t1);
        assert_eq!(pm[(1, 0)], t1);
        assert_eq!(pm[(1, 1)], -MPoly::one());

        let w = construct_rect_witness(2, 3, 2).unwrap();
        let pm = w.to_parametric();
        assert_eq!(pm[(0, 1)], MPoly::var("t1"));
        assert_eq!(pm[(0, 2)], MPoly::var("t2"));
        assert_eq!(pm[(1, 2)], MPoly::var("t3"));
        assert_eq!(pm[(1, 0)], MPoly::zero());
        assert!(pm.is_affine());

        // singleton: constant parametric matrix
        let s = construct_signature_witness(2, 2, 0).unwrap();
        assert_eq!(s.to_parametric(), PMatrix::lift(&QMatrix::identity(2)));
    }

    #[test]
    fn subspace_validation_and_json() {
        let e1 = matrix_unit(2, 2, 0, 1, true).unwrap();
        let dep = e1.scale(&rat(2));
        assert!(AffineSubspace::new(true, QMatrix::identity(2), vec![e1.clone(), dep]).is_err());
        assert!(AffineSubspace::new(
            true,
            QMatrix::identity(2),
            vec![matrix_unit(2, 2, 0, 1, false).unwrap()]
        )
        .is_err());

        let w = construct_sym_witness(3, 2).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert!(s.starts_with(r#"{"m":3,"n":3,"symmetric":true,"#));
        let back: AffineSubspace = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
    }
}
