//! Tilted weights as parametrized endomorphisms of `V_X ⊗ V_Y`, Yang-Baxter
//! commutators, and the Yang-Baxter system relations.

use std::sync::OnceLock;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::boltzmann::{tilted_weight, Leg, TiltedPattern};
use crate::coeff::{sample_point, CoeffElem, EvalPoint, Rational, Ring};
use crate::error::{CalibrationError, YbSystemError};
use crate::lattice::{RowType, Spin};

/// Basis of `V_X`: the (spin, charge) pairs a leg of an X line can carry
/// with nonzero weight. Γ: `(+, c)` for every `c` then `(-, 0)`; Δ:
/// `(-, c)` for every `c` then `(+, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChargedBasis {
    pub kind: RowType,
    pub n: u32,
}

impl ChargedBasis {
    pub fn new(kind: RowType, n: u32) -> Self {
        ChargedBasis { kind, n }
    }

    pub fn dim(&self) -> usize {
        self.n as usize + 1
    }

    pub fn vectors(&self) -> Vec<Leg> {
        let (charged, other) = match self.kind {
            RowType::Gamma => (Spin::Plus, Spin::Minus),
            RowType::Delta => (Spin::Minus, Spin::Plus),
        };
        let mut v: Vec<Leg> = (0..self.n).map(|c| Leg::new(charged, c)).collect();
        v.push(Leg::new(other, 0));
        v
    }

    pub fn index_of(&self, leg: Leg) -> Option<usize> {
        self.vectors().iter().position(|&l| l == leg)
    }
}

/// Which legs of the tilted vertex are the input of the endomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Input (SW, NW), output (NE, SE).
    InputsLeft,
    /// Input (NE, SE), output (SW, NW).
    InputsRight,
}

/// A matrix over `V_X ⊗ V_Y` whose entries are polynomials in the two
/// parameters (`z1`, `z2` of a two-variable ring). When `inverted` is set the
/// endomorphism is the inverse of that matrix, which is only available at
/// numeric points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamEndo {
    pub left: RowType,
    pub right: RowType,
    pub n: u32,
    pub matrix: Vec<CoeffElem>,
    pub inverted: bool,
}

impl ParamEndo {
    pub fn dim(&self) -> usize {
        (self.n as usize + 1).pow(2)
    }

    pub fn ring(&self) -> Ring {
        Ring::new(self.n, 2)
    }

    pub fn entry(&self, row: usize, col: usize) -> &CoeffElem {
        &self.matrix[row * self.dim() + col]
    }

    pub fn identity(left: RowType, right: RowType, n: u32) -> Self {
        let ring = Ring::new(n, 2);
        let dim = (n as usize + 1).pow(2);
        let matrix = (0..dim * dim)
            .map(|k| if k / dim == k % dim { CoeffElem::one(ring) } else { CoeffElem::zero(ring) })
            .collect();
        ParamEndo {
            left,
            right,
            n,
            matrix,
            inverted: false,
        }
    }

    pub fn inverse(&self) -> Self {
        ParamEndo {
            inverted: !self.inverted,
            ..self.clone()
        }
    }

    /// Numeric matrix at `(za, zb)`, inverted if required.
    pub fn at(&self, p: &EvalPoint, za: &Rational, zb: &Rational) -> Result<Vec<Rational>, YbSystemError> {
        let q = p.with_z(vec![za.clone(), zb.clone()]);
        let m: Vec<Rational> = self.matrix.iter().map(|e| e.evaluate(&q)).collect();
        if self.inverted {
            invert(&m, self.dim())
        } else {
            Ok(m)
        }
    }
}

/// `R^{XY}` under an explicit orientation.
pub fn r_matrix_with(x: RowType, y: RowType, n: u32, orientation: Orientation) -> ParamEndo {
    let (bx, by) = (ChargedBasis::new(x, n).vectors(), ChargedBasis::new(y, n).vectors());
    let d = n as usize + 1;
    let dim = d * d;
    let mut matrix = Vec::with_capacity(dim * dim);
    for row in 0..dim {
        for col in 0..dim {
            let (out_x, out_y) = (bx[row / d], by[row % d]);
            let (in_x, in_y) = (bx[col / d], by[col % d]);
            let p = match orientation {
                Orientation::InputsLeft => TiltedPattern { sw: in_x, nw: in_y, ne: out_x, se: out_y },
                Orientation::InputsRight => TiltedPattern { sw: out_x, nw: out_y, ne: in_x, se: in_y },
            };
            matrix.push(tilted_weight(x, y, &p, n));
        }
    }
    ParamEndo {
        left: x,
        right: y,
        n,
        matrix,
        inverted: false,
    }
}

/// `R^{XY}` under the calibrated orientation.
pub fn r_matrix(x: RowType, y: RowType, n: u32) -> Result<ParamEndo, CalibrationError> {
    Ok(r_matrix_with(x, y, n, calibrated_orientation()?))
}

/// The first orientation (inputs on the left tried first) for which
/// `[[R^ΓΓ, R^ΓΓ, R^ΓΓ]] = 0` at `n = 1`. Computed once.
pub fn calibrated_orientation() -> Result<Orientation, CalibrationError> {
    static CELL: OnceLock<Option<Orientation>> = OnceLock::new();
    CELL.get_or_init(|| {
        [Orientation::InputsLeft, Orientation::InputsRight].into_iter().find(|&o| {
            let a = r_matrix_with(RowType::Gamma, RowType::Gamma, 1, o);
            commutator_symbolic(&a, &a, &a).is_ok_and(|c| c.is_zero())
        })
    })
    .ok_or(CalibrationError::Orientation)
}

/// `E^‡(z1, z2) = τ E(z2, z1) τ`.
pub fn dagger(e: &ParamEndo) -> ParamEndo {
    let d = e.n as usize + 1;
    let dim = d * d;
    let ring = e.ring();
    let mut matrix = vec![CoeffElem::zero(ring); dim * dim];
    for row in 0..dim {
        for col in 0..dim {
            let (r2, c2) = ((row % d) * d + row / d, (col % d) * d + col / d);
            matrix[r2 * dim + c2] = e.matrix[row * dim + col].remap_vars(ring, &[1, 0]);
        }
    }
    ParamEndo {
        left: e.right,
        right: e.left,
        n: e.n,
        matrix,
        inverted: e.inverted,
    }
}

// ---------------------------------------------------------------------------
// Sparse matrices over either scalar type.

trait Scalar: Clone + Send + Sync + PartialEq {
    fn vanishes(&self) -> bool;
    fn times(&self, other: &Self) -> Self;
    fn plus(&mut self, other: Self);
    fn minus(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
}

impl Scalar for CoeffElem {
    fn vanishes(&self) -> bool {
        CoeffElem::is_zero(self)
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn plus(&mut self, other: Self) {
        *self += other;
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Scalar for Rational {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn plus(&mut self, other: Self) {
        *self += other;
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn negated(&self) -> Self {
        -self
    }
}

type SparseRow<T> = Vec<(usize, T)>;

struct Sparse<T> {
    rows: Vec<SparseRow<T>>,
}

/// Embed a `d^2 × d^2` matrix acting on factors `pos` of a triple product.
fn embed<T: Scalar>(m: &[T], d: usize, pos: (usize, usize)) -> Sparse<T> {
    let dim2 = d * d;
    let dim3 = d * d * d;
    let other = 3 - pos.0 - pos.1;
    let digits = |i: usize| [i / (d * d), (i / d) % d, i % d];
    let mut rows = Vec::with_capacity(dim3);
    for i in 0..dim3 {
        let ii = digits(i);
        let r = ii[pos.0] * d + ii[pos.1];
        let mut row = Vec::new();
        for c in 0..dim2 {
            let e = &m[r * dim2 + c];
            if e.vanishes() {
                continue;
            }
            let mut jj = ii;
            jj[pos.0] = c / d;
            jj[pos.1] = c % d;
            debug_assert_eq!(jj[other], ii[other]);
            row.push((jj[0] * d * d + jj[1] * d + jj[2], e.clone()));
        }
        row.sort_by_key(|(j, _)| *j);
        rows.push(row);
    }
    Sparse { rows }
}

fn row_times<T: Scalar>(v: &SparseRow<T>, m: &Sparse<T>) -> SparseRow<T> {
    let mut acc: Vec<Option<T>> = vec![None; m.rows.len()];
    for (k, x) in v {
        for (j, y) in &m.rows[*k] {
            let p = x.times(y);
            match &mut acc[*j] {
                Some(s) => s.plus(p),
                slot => *slot = Some(p),
            }
        }
    }
    acc.into_iter()
        .enumerate()
        .filter_map(|(j, e)| e.filter(|e| !e.vanishes()).map(|e| (j, e)))
        .collect()
}

/// Nonzero entries of `A12 B13 C23 - C23 B13 A12`, row by row.
fn triple_difference<T: Scalar>(a: &Sparse<T>, b: &Sparse<T>, c: &Sparse<T>) -> Vec<(usize, usize, T)> {
    (0..a.rows.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let l = row_times(&row_times(&a.rows[i], b), c);
            let r = row_times(&row_times(&c.rows[i], b), a);
            let mut out = Vec::new();
            let (mut p, mut q) = (0, 0);
            while p < l.len() || q < r.len() {
                let take_l = q >= r.len() || (p < l.len() && l[p].0 < r[q].0);
                let take_r = p >= l.len() || (q < r.len() && r[q].0 < l[p].0);
                if take_l {
                    out.push((i, l[p].0, l[p].1.clone()));
                    p += 1;
                } else if take_r {
                    out.push((i, r[q].0, r[q].1.negated()));
                    q += 1;
                } else {
                    let diff = l[p].1.minus(&r[q].1);
                    if !diff.vanishes() {
                        out.push((i, l[p].0, diff));
                    }
                    p += 1;
                    q += 1;
                }
            }
            out
        })
        .collect()
}

/// Value of `[[A, B, C]]` as its nonzero entries.
#[derive(Clone, Debug)]
pub struct Commutator<T> {
    pub dim: usize,
    pub nonzero: Vec<(usize, usize, T)>,
}

impl<T> Commutator<T> {
    pub fn is_zero(&self) -> bool {
        self.nonzero.is_empty()
    }
}

fn check_shapes(a: &ParamEndo, b: &ParamEndo, c: &ParamEndo) -> Result<(), YbSystemError> {
    let ok = a.left == b.left && a.right == c.left && b.right == c.right && a.n == b.n && b.n == c.n;
    if ok {
        Ok(())
    } else {
        Err(YbSystemError::Shape(format!(
            "A on {}⊗{}, B on {}⊗{}, C on {}⊗{}",
            a.left, a.right, b.left, b.right, c.left, c.right
        )))
    }
}

/// `A12(z1,z2) B13(z1,z3) C23(z2,z3) - C23 B13 A12` with symbolic `z1, z2, z3`.
pub fn commutator_symbolic(a: &ParamEndo, b: &ParamEndo, c: &ParamEndo) -> Result<Commutator<CoeffElem>, YbSystemError> {
    check_shapes(a, b, c)?;
    if a.inverted || b.inverted || c.inverted {
        return Err(YbSystemError::NeedsPoint);
    }
    let ring3 = Ring::new(a.n, 3);
    let d = a.n as usize + 1;
    let lift = |e: &ParamEndo, vars: [usize; 2]| -> Vec<CoeffElem> {
        e.matrix.iter().map(|x| x.remap_vars(ring3, &vars)).collect()
    };
    let ea = embed(&lift(a, [0, 1]), d, (0, 1));
    let eb = embed(&lift(b, [0, 2]), d, (0, 2));
    let ec = embed(&lift(c, [1, 2]), d, (1, 2));
    Ok(Commutator {
        dim: d * d * d,
        nonzero: triple_difference(&ea, &eb, &ec),
    })
}

/// The commutator at the numeric point `p`, using its three z values.
pub fn commutator_at(a: &ParamEndo, b: &ParamEndo, c: &ParamEndo, p: &EvalPoint) -> Result<Commutator<Rational>, YbSystemError> {
    check_shapes(a, b, c)?;
    let z = p.z_vals();
    assert!(z.len() >= 3, "commutator points need three z values");
    let d = a.n as usize + 1;
    let ea = embed(&a.at(p, &z[0], &z[1])?, d, (0, 1));
    let eb = embed(&b.at(p, &z[0], &z[2])?, d, (0, 2));
    let ec = embed(&c.at(p, &z[1], &z[2])?, d, (1, 2));
    Ok(Commutator {
        dim: d * d * d,
        nonzero: triple_difference(&ea, &eb, &ec),
    })
}

/// Exact Gauss-Jordan inverse of a dense `dim × dim` rational matrix.
pub fn invert(m: &[Rational], dim: usize) -> Result<Vec<Rational>, YbSystemError> {
    let w = 2 * dim;
    let mut a = vec![Rational::zero(); dim * w];
    for i in 0..dim {
        for j in 0..dim {
            a[i * w + j] = m[i * dim + j].clone();
        }
        a[i * w + dim + i] = Rational::one();
    }
    for col in 0..dim {
        let pivot = (col..dim).find(|&r| !a[r * w + col].is_zero()).ok_or(YbSystemError::Singular)?;
        if pivot != col {
            for j in 0..w {
                a.swap(pivot * w + j, col * w + j);
            }
        }
        let inv = a[col * w + col].recip();
        for j in 0..w {
            a[col * w + j] *= &inv;
        }
        for r in 0..dim {
            if r == col || a[r * w + col].is_zero() {
                continue;
            }
            let f = a[r * w + col].clone();
            for j in 0..w {
                let t = &f * &a[col * w + j];
                a[r * w + j] -= t;
            }
        }
    }
    Ok((0..dim)
        .flat_map(|i| a[i * w + dim..(i + 1) * w].to_vec())
        .collect())
}

/// The four endomorphisms of the system.
pub struct YbSystem {
    pub a: ParamEndo,
    pub b: ParamEndo,
    pub c: ParamEndo,
    pub d: ParamEndo,
}

impl YbSystem {
    /// `A = R^ΓΓ`, `B = (R^ΔΓ)^{-1}`, `C = R^ΓΔ`, `D = (R^ΔΔ)^‡`.
    pub fn new(n: u32, orientation: Orientation) -> Self {
        use RowType::{Delta as D, Gamma as G};
        YbSystem {
            a: r_matrix_with(G, G, n, orientation),
            b: r_matrix_with(D, G, n, orientation).inverse(),
            c: r_matrix_with(G, D, n, orientation),
            d: dagger(&r_matrix_with(D, D, n, orientation)),
        }
    }

    /// The eight relations as (name, A, B, C) triples.
    pub fn relations(&self) -> Vec<(&'static str, ParamEndo, ParamEndo, ParamEndo)> {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let (bd, cd) = (dagger(b), dagger(c));
        vec![
            ("[[A,A,A]]", a.clone(), a.clone(), a.clone()),
            ("[[A,C,C]]", a.clone(), c.clone(), c.clone()),
            ("[[A,B',B']]", a.clone(), bd.clone(), bd.clone()),
            ("[[A,C,B']]", a.clone(), c.clone(), bd),
            ("[[D,D,D]]", d.clone(), d.clone(), d.clone()),
            ("[[D,B,B]]", d.clone(), b.clone(), b.clone()),
            ("[[D,C',C']]", d.clone(), cd.clone(), cd.clone()),
            ("[[D,B,C']]", d.clone(), b.clone(), cd),
        ]
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationVerdict {
    /// `'` stands for the ‡ involution.
    pub relation: String,
    pub mode: &'static str,
    pub points: usize,
    pub resamples: usize,
    pub nonzero_entries: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct YbSystemReport {
    pub n: u32,
    pub orientation: Orientation,
    pub relations: Vec<RelationVerdict>,
    /// Scalar `c` with `R^ΔΓ (R^ΓΔ)^‡ = c · Id`.
    pub proportionality: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proportionality_error: Option<String>,
}

impl YbSystemReport {
    pub fn passed(&self) -> bool {
        self.proportionality.is_some() && self.relations.iter().all(|r| r.passed)
    }
}

/// Check all eight relations. Inversion-free ones are symbolic; the others
/// are evaluated exactly at `num_points` seeded points, skipping (and
/// counting) points where an inverse does not exist.
pub fn verify_yb_system(n: u32, num_points: usize, seed: u64) -> Result<YbSystemReport, CalibrationError> {
    let orientation = calibrated_orientation()?;
    let sys = YbSystem::new(n, orientation);
    let mut relations = Vec::new();
    for (name, a, b, c) in sys.relations() {
        let needs_points = a.inverted || b.inverted || c.inverted;
        let verdict = if !needs_points {
            match commutator_symbolic(&a, &b, &c) {
                Ok(k) => RelationVerdict {
                    relation: name.into(),
                    mode: "symbolic",
                    points: 0,
                    resamples: 0,
                    nonzero_entries: k.nonzero.len(),
                    first_failure: k.nonzero.first().map(|(i, j, e)| format!("entry ({i}, {j}) = {e}")),
                    passed: k.is_zero(),
                },
                Err(e) => failed_verdict(name, "symbolic", e.to_string()),
            }
        } else {
            sampled_verdict(name, &a, &b, &c, n, num_points, seed)
        };
        relations.push(verdict);
    }
    let (proportionality, proportionality_error) = match proportionality(n) {
        Ok(c) => (Some(c.to_string()), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(YbSystemReport {
        n,
        orientation,
        relations,
        proportionality,
        proportionality_error,
    })
}

fn failed_verdict(name: &str, mode: &'static str, msg: String) -> RelationVerdict {
    RelationVerdict {
        relation: name.into(),
        mode,
        points: 0,
        resamples: 0,
        nonzero_entries: 0,
        first_failure: Some(msg),
        passed: false,
    }
}

fn sampled_verdict(
    name: &str,
    a: &ParamEndo,
    b: &ParamEndo,
    c: &ParamEndo,
    n: u32,
    num_points: usize,
    seed: u64,
) -> RelationVerdict {
    let base = seed ^ ((n as u64) << 32);
    let (mut points, mut resamples, mut nonzero) = (0, 0, 0);
    let mut first_failure = None;
    let mut k = 0u64;
    while points < num_points {
        if resamples > 10 * num_points + 100 {
            return failed_verdict(name, "sampled", "too many singular sample points".into());
        }
        let p = sample_point(n, 3, base.wrapping_add(k));
        k += 1;
        match commutator_at(a, b, c, &p) {
            Ok(com) => {
                points += 1;
                if let Some((i, j, e)) = com.nonzero.first() {
                    first_failure.get_or_insert_with(|| format!("seed {}: entry ({i}, {j}) = {e}", base.wrapping_add(k - 1)));
                }
                nonzero += com.nonzero.len();
            }
            Err(YbSystemError::Singular) => resamples += 1,
            Err(e) => return failed_verdict(name, "sampled", e.to_string()),
        }
    }
    RelationVerdict {
        relation: name.into(),
        mode: "sampled",
        points,
        resamples,
        nonzero_entries: nonzero,
        passed: first_failure.is_none(),
        first_failure,
    }
}

/// The scalar `c(z1, z2)` with `R^ΔΓ(z1,z2) (R^ΓΔ)^‡(z1,z2) = c · Id`.
pub fn proportionality(n: u32) -> Result<CoeffElem, YbSystemError> {
    let o = calibrated_orientation().map_err(|e| YbSystemError::Shape(e.to_string()))?;
    let r = r_matrix_with(RowType::Delta, RowType::Gamma, n, o);
    let s = dagger(&r_matrix_with(RowType::Gamma, RowType::Delta, n, o));
    let dim = r.dim();
    let ring = r.ring();
    let product: Vec<CoeffElem> = (0..dim * dim)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / dim, k % dim);
            let mut acc = CoeffElem::zero(ring);
            for l in 0..dim {
                let (x, y) = (r.entry(i, l), s.entry(l, j));
                if !x.is_zero() && !y.is_zero() {
                    acc += x * y;
                }
            }
            acc
        })
        .collect();
    let c = product[0].clone();
    for i in 1..dim {
        if product[i * dim + i] != c {
            return Err(YbSystemError::NotScalar {
                row: i,
                col: i,
                entry: product[i * dim + i].to_string(),
            });
        }
    }
    for i in 0..dim {
        for j in 0..dim {
            if i != j && !product[i * dim + j].is_zero() {
                return Err(YbSystemError::NotScalar {
                    row: i,
                    col: j,
                    entry: product[i * dim + j].to_string(),
                });
            }
        }
    }
    if c.is_zero() {
        return Err(YbSystemError::NotScalar {
            row: 0,
            col: 0,
            entry: "0".into(),
        });
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use RowType::{Delta as D, Gamma as G};

    #[test]
    fn bases() {
        let b = ChargedBasis::new(G, 3);
        assert_eq!(b.dim(), 4);
        assert_eq!(b.vectors()[3], Leg::new(Spin::Minus, 0));
        assert_eq!(ChargedBasis::new(D, 2).index_of(Leg::new(Spin::Minus, 1)), Some(1));
        assert_eq!(ChargedBasis::new(D, 2).index_of(Leg::new(Spin::Plus, 1)), None);
    }

    #[test]
    fn n1_matrix_has_six_entries() {
        let r = r_matrix(G, G, 1).unwrap();
        assert_eq!(r.matrix.iter().filter(|e| !e.is_zero()).count(), 6);
    }

    #[test]
    fn entries_are_tilted_weights() {
        let r = r_matrix_with(G, D, 2, Orientation::InputsLeft);
        // (+,0) in V_Γ is index 0; (+,0) in V_Δ is index 2.
        let leg = Leg::new(Spin::Plus, 0);
        let p = TiltedPattern { sw: leg, nw: leg, ne: leg, se: leg };
        assert_eq!(*r.entry(2, 2), tilted_weight(G, D, &p, 2));
        let s = r_matrix_with(G, D, 2, Orientation::InputsRight);
        assert_eq!(*s.entry(2, 2), *r.entry(2, 2));
    }

    #[test]
    fn dagger_is_involution_and_swaps_types() {
        for n in 1..=3 {
            let r = r_matrix(D, D, n).unwrap();
            assert_eq!(dagger(&dagger(&r)), r);
            let gd = r_matrix(G, D, n).unwrap();
            let t = dagger(&gd);
            assert_eq!((t.left, t.right), (D, G));
        }
    }

    #[test]
    fn dagger_n1_by_hand() {
        let r = r_matrix(G, D, 1).unwrap();
        let t = dagger(&r);
        let flip = [0, 2, 1, 3];
        for i in 0..4 {
            for j in 0..4 {
                let swapped = r.entry(flip[i], flip[j]).remap_vars(r.ring(), &[1, 0]);
                assert_eq!(*t.entry(i, j), swapped);
            }
        }
    }

    #[test]
    fn identity_commutator_vanishes() {
        let id = ParamEndo::identity(G, G, 2);
        assert!(commutator_symbolic(&id, &id, &id).unwrap().is_zero());
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = r_matrix(G, G, 1).unwrap();
        let c = r_matrix(D, D, 1).unwrap();
        assert!(matches!(commutator_symbolic(&a, &a, &c), Err(YbSystemError::Shape(_))));
    }

    #[test]
    fn orientation_is_inputs_left() {
        assert_eq!(calibrated_orientation().unwrap(), Orientation::InputsLeft);
    }

    #[test]
    fn equal_parameters_commute() {
        let a = r_matrix(G, G, 2).unwrap();
        let p = sample_point(2, 3, 1);
        let z = p.z_vals()[0].clone();
        let q = p.with_z(vec![z.clone(), z.clone(), z]);
        assert!(commutator_at(&a, &a, &a, &q).unwrap().is_zero());
    }

    #[test]
    fn inverse_round_trip() {
        let r = r_matrix(D, G, 2).unwrap();
        let p = sample_point(2, 2, 9);
        let z = p.z_vals().to_vec();
        let m = r.at(&p, &z[0], &z[1]).unwrap();
        let inv = r.inverse().at(&p, &z[0], &z[1]).unwrap();
        let dim = r.dim();
        for i in 0..dim {
            for j in 0..dim {
                let s: Rational = (0..dim).map(|k| &m[i * dim + k] * &inv[k * dim + j]).sum();
                assert_eq!(s, if i == j { Rational::one() } else { Rational::zero() });
            }
        }
    }

    #[test]
    fn system_n1() {
        let rep = verify_yb_system(1, 20, 7).unwrap();
        assert!(rep.passed(), "{rep:?}");
        assert_eq!(rep.relations.len(), 8);
    }

    #[test]
    fn proportionality_n1() {
        let c = proportionality(1).unwrap();
        assert!(!c.is_zero());
    }

    #[test]
    fn perturbed_entry_breaks_relation() {
        let a = r_matrix(G, G, 2).unwrap();
        let mut c = r_matrix(G, D, 2).unwrap();
        assert!(commutator_symbolic(&a, &c, &c).unwrap().is_zero());
        let k = c.matrix.iter().position(|e| !e.is_zero() && !e.is_monomial()).unwrap();
        c.matrix[k] = &c.matrix[k] * &CoeffElem::v(c.ring());
        assert!(!commutator_symbolic(&a, &c, &c).unwrap().is_zero());
    }

    #[test]
    fn proportionality_factorizes() {
        for n in 1..=3 {
            let ring = Ring::new(n, 2);
            let (z1, z2) = (CoeffElem::z_pow(ring, 0, n as i32), CoeffElem::z_pow(ring, 1, n as i32));
            let v = CoeffElem::v(ring);
            let expected = (&z2 - &(&v.pow(n) * &z1)) * (&z2 - &(&v * &z1));
            assert_eq!(proportionality(n).unwrap(), expected);
        }
    }
}
