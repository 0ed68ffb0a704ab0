//! Affine-column-independent matrices: the ACI predicate, the column-split
//! transform producing one, and the dimension count of the two-triangular-
//! block completion families.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::matrix::PMatrix;
use crate::{Error, Result};

/// Why a matrix fails to be ACI. Column numbers are 1-based, matching the
/// `name#column` convention of [`acify`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AciViolation {
    SharedParameter { param: String, columns: Vec<usize> },
    DegreeTooHigh { row: usize, col: usize, degree: u32 },
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AciReport {
    pub is_aci: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<AciViolation>,
}

fn param_columns(m: &PMatrix) -> BTreeMap<String, BTreeSet<usize>> {
    let mut cols: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            for p in m[(i, j)].params() {
                cols.entry(p).or_default().insert(j);
            }
        }
    }
    cols
}

/// True iff every entry has degree <= 1 and no parameter appears in two
/// different columns. The report carries the first violation found: degree
/// offenders row-major, then shared parameters alphabetically.
pub fn is_aci(m: &PMatrix) -> AciReport {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let d = m[(i, j)].total_degree();
            if d > 1 {
                return AciReport {
                    is_aci: false,
                    violation: Some(AciViolation::DegreeTooHigh { row: i, col: j, degree: d }),
                };
            }
        }
    }
    for (param, cols) in param_columns(m) {
        if cols.len() > 1 {
            return AciReport {
                is_aci: false,
                violation: Some(AciViolation::SharedParameter {
                    param,
                    columns: cols.into_iter().map(|j| j + 1).collect(),
                }),
            };
        }
    }
    AciReport { is_aci: true, violation: None }
}

/// Splits every parameter that appears in more than one column into fresh
/// per-column copies named `name#column` (1-based). The result is ACI;
/// already-ACI input comes back unchanged; assigning all copies of a split
/// parameter one common value recovers the original specialization.
pub fn acify(m: &PMatrix) -> Result<PMatrix> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let d = m[(i, j)].total_degree();
            if d > 1 {
                return Err(Error::DegreeTooHigh { row: i, col: j, degree: d });
            }
        }
    }
    let shared: BTreeSet<String> = param_columns(m)
        .into_iter()
        .filter(|(_, cols)| cols.len() > 1)
        .map(|(p, _)| p)
        .collect();
    Ok(PMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        m[(i, j)].rename_params(|name| {
            if shared.contains(name) {
                format!("{name}#{}", j + 1)
            } else {
                name.to_string()
            }
        })
    }))
}

/// Dimension of the completion family with two upper-triangular diagonal
/// blocks of orders k and r-k inside an m x n shape. Both published forms
/// are evaluated and must agree:
/// k(k-1)/2 + (r-k)(r-k-1)/2 + k(n-k) + (r-k)(m-r)  =  -r^2/2 - r/2 + k(n-m) + rm.
pub fn hz_family_dim(m: usize, n: usize, r: usize, k: usize) -> Result<i64> {
    if !(k <= r && r <= m && m <= n) {
        return Err(Error::BadParams(format!(
            "need k <= r <= m <= n, got k={k}, r={r}, m={m}, n={n}"
        )));
    }
    let (m, n, r, k) = (m as i64, n as i64, r as i64, k as i64);
    let long = k * (k - 1) / 2 + (r - k) * (r - k - 1) / 2 + k * (n - k) + (r - k) * (m - k - r + k);
    let simplified = -(r * r + r) / 2 + k * (n - m) + r * m;
    assert_eq!(long, simplified, "the two published forms must agree");
    Ok(simplified)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::MPoly;
    use crate::scalar::rat;
    use std::collections::BTreeMap;

    fn remark_matrix() -> PMatrix {
        // [[1, s],[s, -1]]
        let s = MPoly::var("s");
        PMatrix::new(2, 2, vec![MPoly::one(), s.clone(), s, -MPoly::one()]).unwrap()
    }

    #[test]
    fn remark_matrix_is_not_aci() {
        let rep = is_aci(&remark_matrix());
        assert!(!rep.is_aci);
        assert_eq!(
            rep.violation,
            Some(AciViolation::SharedParameter {
                param: "s".into(),
                columns: vec![1, 2]
            })
        );
    }

    #[test]
    fn distinct_parameters_are_aci() {
        let m = PMatrix::new(
            2,
            2,
            vec![MPoly::one(), MPoly::var("s"), MPoly::var("t"), -MPoly::one()],
        )
        .unwrap();
        assert!(is_aci(&m).is_aci);
    }

    #[test]
    fn degree_two_is_not_aci() {
        let s = MPoly::var("s");
        let m = PMatrix::new(
            2,
            2,
            vec![&s * &s, MPoly::zero(), MPoly::zero(), MPoly::one()],
        )
        .unwrap();
        let rep = is_aci(&m);
        assert_eq!(
            rep.violation,
            Some(AciViolation::DegreeTooHigh { row: 0, col: 0, degree: 2 })
        );
        assert!(acify(&m).is_err());
    }

    #[test]
    fn acify_splits_shared_parameters() {
        let out = acify(&remark_matrix()).unwrap();
        assert_eq!(out[(0, 1)], MPoly::var("s#2"));
        assert_eq!(out[(1, 0)], MPoly::var("s#1"));
        assert!(is_aci(&out).is_aci);
        // idempotent on its own output
        assert_eq!(acify(&out).unwrap(), out);
    }

    #[test]
    fn acify_leaves_single_column_parameters_alone() {
        // [[s, s+t],[0, t]]: s splits across columns 1 and 2, t stays
        let (s, t) = (MPoly::var("s"), MPoly::var("t"));
        let m = PMatrix::new(
            2,
            2,
            vec![s.clone(), &s + &t, MPoly::zero(), t.clone()],
        )
        .unwrap();
        let out = acify(&m).unwrap();
        assert_eq!(out[(0, 0)], MPoly::var("s#1"));
        assert_eq!(out[(0, 1)], &MPoly::var("s#2") + &t);
        assert_eq!(out[(1, 1)], t);
    }

    #[test]
    fn diagonal_specialization_recovers_the_original() {
        let m = remark_matrix();
        let out = acify(&m).unwrap();
        for v in [rat(3), rat(-2), rat(0)] {
            let mut orig = BTreeMap::new();
            orig.insert("s".to_string(), v.clone());
            let mut dup = BTreeMap::new();
            dup.insert("s#1".to_string(), v.clone());
            dup.insert("s#2".to_string(), v.clone());
            assert_eq!(m.eval_point(&orig).unwrap(), out.eval_point(&dup).unwrap());
        }
    }

    #[test]
    fn hz_dim_values() {
        assert_eq!(hz_family_dim(3, 5, 2, 2).unwrap(), 7);
        // independent of k when m = n
        let vals: Vec<i64> = (0..=3).map(|k| hz_family_dim(4, 4, 3, k).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[0] == w[1]));
        assert!(hz_family_dim(3, 5, 4, 0).is_err());
        assert!(hz_family_dim(5, 3, 1, 0).is_err());
    }

    #[test]
    fn hz_forms_agree_on_the_full_range() {
        for n in 0..=10usize {
            for m in 0..=n {
                for r in 0..=m {
                    for k in 0..=r {
                        hz_family_dim(m, n, r, k).unwrap();
                    }
                }
            }
        }
    }
}
