//! Boltzmann weights: the Γ and Δ vertex tables, the four tilted R-vertex
//! tables, and the calibration of slot conventions.
//!
//! The vertex tables are stored in their printed form (four spin slots, two
//! charge slots); a [`SlotConvention`] says which edge each
//! slot refers to.

use serde::Serialize;

use crate::coeff::{CoeffElem, Ring};
use crate::error::CalibrationError;
use crate::lattice::{derive_charges, parse_spins, RowType, Spin, SpinState};

/// One edge of an ordinary (untilted) vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Edge {
    Left,
    Top,
    Right,
    Bottom,
}

/// Which edge each printed slot denotes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SlotConvention {
    pub spins: [Edge; 4],
    pub charges: [Edge; 2],
}

impl SlotConvention {
    /// The reading validated against the fully labelled reference state.
    pub const CALIBRATED: SlotConvention = SlotConvention {
        spins: [Edge::Left, Edge::Top, Edge::Right, Edge::Bottom],
        charges: [Edge::Left, Edge::Right],
    };

    /// The clockwise-from-top reading; rejected by calibration.
    pub const CLOCKWISE_FROM_TOP: SlotConvention = SlotConvention {
        spins: [Edge::Top, Edge::Right, Edge::Bottom, Edge::Left],
        charges: [Edge::Left, Edge::Right],
    };

    /// Calibrated spins with the two charge slots exchanged; rejected.
    pub const SWAPPED_CHARGES: SlotConvention = SlotConvention {
        spins: [Edge::Left, Edge::Top, Edge::Right, Edge::Bottom],
        charges: [Edge::Right, Edge::Left],
    };
}

/// Spins and charges around an ordinary vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct VertexPattern {
    pub left: Spin,
    pub top: Spin,
    pub right: Spin,
    pub bottom: Spin,
    pub left_charge: u32,
    pub right_charge: u32,
}

impl VertexPattern {
    pub fn new(spins: (Spin, Spin, Spin, Spin), charges: (u32, u32)) -> Self {
        VertexPattern {
            left: spins.0,
            top: spins.1,
            right: spins.2,
            bottom: spins.3,
            left_charge: charges.0,
            right_charge: charges.1,
        }
    }

    fn spin(&self, e: Edge) -> Spin {
        match e {
            Edge::Left => self.left,
            Edge::Top => self.top,
            Edge::Right => self.right,
            Edge::Bottom => self.bottom,
        }
    }

    fn charge(&self, e: Edge) -> Option<u32> {
        match e {
            Edge::Left => Some(self.left_charge),
            Edge::Right => Some(self.right_charge),
            _ => None,
        }
    }

    /// `+-+-`-style string in (left, top, right, bottom) order.
    pub fn spin_string(&self) -> String {
        [self.left, self.top, self.right, self.bottom].iter().map(|s| s.symbol()).collect()
    }
}

/// A printed charge annotation; `a` is a free residue.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ChargeSlot {
    A,
    APlusOne,
    Fixed(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum WeightExpr {
    One,
    Z,
    GaussA,
    GaussAZ,
    OneMinusVZ,
}

struct TableEntry {
    label: &'static str,
    spins: &'static str,
    charges: [ChargeSlot; 2],
    weight: WeightExpr,
}

use ChargeSlot::{APlusOne, Fixed, A};

const GAMMA_TABLE: [TableEntry; 6] = [
    TableEntry { label: "a1", spins: "++++", charges: [APlusOne, A], weight: WeightExpr::One },
    TableEntry { label: "a2", spins: "----", charges: [Fixed(0), Fixed(0)], weight: WeightExpr::Z },
    TableEntry { label: "b1", spins: "+-+-", charges: [APlusOne, A], weight: WeightExpr::GaussA },
    TableEntry { label: "b2", spins: "-+-+", charges: [Fixed(0), Fixed(0)], weight: WeightExpr::Z },
    TableEntry { label: "c1", spins: "-++-", charges: [Fixed(0), Fixed(0)], weight: WeightExpr::OneMinusVZ },
    TableEntry { label: "c2", spins: "+--+", charges: [Fixed(1), Fixed(0)], weight: WeightExpr::One },
];

const DELTA_TABLE: [TableEntry; 6] = [
    TableEntry { label: "a1", spins: "++++", charges: [Fixed(0), Fixed(0)], weight: WeightExpr::One },
    TableEntry { label: "a2", spins: "----", charges: [A, APlusOne], weight: WeightExpr::GaussAZ },
    TableEntry { label: "b1", spins: "+-+-", charges: [Fixed(0), Fixed(0)], weight: WeightExpr::One },
    TableEntry { label: "b2", spins: "-+-+", charges: [A, APlusOne], weight: WeightExpr::Z },
    TableEntry { label: "c1", spins: "-++-", charges: [Fixed(0), Fixed(0)], weight: WeightExpr::OneMinusVZ },
    TableEntry { label: "c2", spins: "+--+", charges: [Fixed(0), Fixed(1)], weight: WeightExpr::One },
];

fn table(kind: RowType) -> &'static [TableEntry; 6] {
    match kind {
        RowType::Gamma => &GAMMA_TABLE,
        RowType::Delta => &DELTA_TABLE,
    }
}

/// Solve the charge annotations for `a`. `Some(None)` means no constraint.
fn match_charges(slots: &[ChargeSlot; 2], got: [u32; 2], n: u32) -> Option<Option<u32>> {
    let mut a: Option<u32> = None;
    for (slot, &c) in slots.iter().zip(&got) {
        let c = c % n;
        match *slot {
            Fixed(k) => {
                if c != k % n {
                    return None;
                }
            }
            A | APlusOne => {
                let cand = if *slot == A { c } else { (c + n - 1) % n };
                if a.is_some_and(|x| x != cand) {
                    return None;
                }
                a = Some(cand);
            }
        }
    }
    Some(a)
}

fn find_entry(kind: RowType, p: &VertexPattern, conv: SlotConvention, n: u32) -> Option<(&'static TableEntry, u32)> {
    let spins_here: Vec<Spin> = conv.spins.iter().map(|&e| p.spin(e)).collect();
    let charges_here = [p.charge(conv.charges[0])?, p.charge(conv.charges[1])?];
    for entry in table(kind) {
        if parse_spins(entry.spins).as_deref() != Some(&spins_here[..]) {
            continue;
        }
        if let Some(a) = match_charges(&entry.charges, charges_here, n) {
            return Some((entry, a.unwrap_or(0)));
        }
    }
    None
}

/// Label (`a1` ... `c2`) of the table entry a pattern matches, if any.
pub fn classify(kind: RowType, p: &VertexPattern, n: u32) -> Option<&'static str> {
    find_entry(kind, p, SlotConvention::CALIBRATED, n).map(|(e, _)| e.label)
}

/// Weight of an ordinary vertex under an explicit slot convention.
pub fn vertex_weight_with(
    kind: RowType,
    p: &VertexPattern,
    ring: Ring,
    var: usize,
    conv: SlotConvention,
) -> CoeffElem {
    let Some((entry, a)) = find_entry(kind, p, conv, ring.modulus()) else {
        return CoeffElem::zero(ring);
    };
    let z = || CoeffElem::z(ring, var);
    match entry.weight {
        WeightExpr::One => CoeffElem::one(ring),
        WeightExpr::Z => z(),
        WeightExpr::GaussA => CoeffElem::g(ring, a as i64),
        WeightExpr::GaussAZ => &CoeffElem::g(ring, a as i64) * &z(),
        WeightExpr::OneMinusVZ => &(&CoeffElem::one(ring) - &CoeffElem::v(ring)) * &z(),
    }
}

pub fn vertex_weight(kind: RowType, p: &VertexPattern, ring: Ring, var: usize) -> CoeffElem {
    vertex_weight_with(kind, p, ring, var, SlotConvention::CALIBRATED)
}

/// Γ weight with spectral variable `z_{var+1}`.
pub fn gamma_weight(p: &VertexPattern, ring: Ring, var: usize) -> CoeffElem {
    vertex_weight(RowType::Gamma, p, ring, var)
}

/// Δ weight with spectral variable `z_{var+1}`.
pub fn delta_weight(p: &VertexPattern, ring: Ring, var: usize) -> CoeffElem {
    vertex_weight(RowType::Delta, p, ring, var)
}

/// Every pattern with nonzero weight for a row type, with its label.
pub fn nonzero_vertex_patterns(kind: RowType, n: u32) -> Vec<(&'static str, VertexPattern)> {
    let mut out = Vec::new();
    for pat in all_vertex_patterns(n) {
        if let Some(l) = classify(kind, &pat, n) {
            out.push((l, pat));
        }
    }
    out
}

/// All `16 n^2` spin/charge combinations.
pub fn all_vertex_patterns(n: u32) -> impl Iterator<Item = VertexPattern> {
    (0..16u32).flat_map(move |bits| {
        let s = |k: u32| if bits >> k & 1 == 1 { Spin::Minus } else { Spin::Plus };
        let spins = (s(3), s(2), s(1), s(0));
        (0..n).flat_map(move |cl| (0..n).map(move |cr| VertexPattern::new(spins, (cl, cr))))
    })
}

// ---------------------------------------------------------------------------
// Tilted vertices.

/// Spin and charge on one leg of a tilted vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Leg {
    pub spin: Spin,
    pub charge: u32,
}

impl Leg {
    pub const fn new(spin: Spin, charge: u32) -> Self {
        Leg { spin, charge }
    }
}

/// The four legs of a tilted vertex. The X line runs SW to NE and carries
/// `z1`; the Y line runs NW to SE and carries `z2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct TiltedPattern {
    pub sw: Leg,
    pub nw: Leg,
    pub ne: Leg,
    pub se: Leg,
}

/// Order in which the printed table arguments list the legs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TableLegOrder {
    /// (SW, NW, NE, SE): incoming legs, then outgoing. Calibrated.
    InThenOut,
    /// (NE, SE, SW, NW). Fails the Yang-Baxter equation.
    OutThenIn,
}

impl TiltedPattern {
    pub fn slots(&self, order: TableLegOrder) -> [Leg; 4] {
        match order {
            TableLegOrder::InThenOut => [self.sw, self.nw, self.ne, self.se],
            TableLegOrder::OutThenIn => [self.ne, self.se, self.sw, self.nw],
        }
    }

    pub fn from_slots(slots: [Leg; 4]) -> Self {
        TiltedPattern {
            sw: slots[0],
            nw: slots[1],
            ne: slots[2],
            se: slots[3],
        }
    }
}

/// Representative of `a` mod `n` in `[1, n]`.
fn rep_1n(a: u32, n: u32) -> i32 {
    match a % n {
        0 => n as i32,
        r => r as i32,
    }
}

/// Table entry for the tilted vertex of type `(x, y)` given spins and
/// charges in slot order (SW, NW, NE, SE); `z1 = z_{v1+1}`, `z2 = z_{v2+1}`.
pub fn tilted_weight_slots(
    x: RowType,
    y: RowType,
    spins: [Spin; 4],
    charges: [u32; 4],
    ring: Ring,
    v1: usize,
    v2: usize,
) -> CoeffElem {
    use RowType::{Delta as D, Gamma as G};
    let n = ring.modulus();
    let ni = n as i32;
    let [a, b, c, d] = charges.map(|q| q % n);
    let s: String = spins.iter().map(|s| s.symbol()).collect();

    let one = CoeffElem::one(ring);
    let v = CoeffElem::v(ring);
    let vp = |k: i32| CoeffElem::v_pow(ring, k);
    let z1 = |k: i32| CoeffElem::z_pow(ring, v1, k);
    let z2 = |k: i32| CoeffElem::z_pow(ring, v2, k);
    let g = |k: i64| CoeffElem::g(ring, k);
    let one_minus_v = || &one - &v;
    let (z1n, z2n) = (z1(ni), z2(ni));
    // z1^n - v z2^n and friends
    let z1_vz2 = || &z1n - &(&v * &z2n);
    let z2_vz1 = || &z2n - &(&v * &z1n);
    let z1_z2 = || &z1n - &z2n;
    let z2_vnz1 = || &z2n - &(&vp(ni) * &z1n);
    let sums_to_one = |p: u32, q: u32| (p + q) % n == 1 % n;
    let zero = CoeffElem::zero(ring);

    match (x, y, s.as_str()) {
        (G, D, "++++") if a == c && b == 0 && d == 0 => z1_vz2(),
        (G, D, "----") if a == 0 && c == 0 && b == d => z1_vz2(),
        (G, D, "+-+-") => {
            if a == c && b == d {
                if sums_to_one(a, b) {
                    &(&vp(2) * &z2n) - &z1n
                } else {
                    &g(a as i64 + b as i64 - 1) * &z1_vz2()
                }
            } else if sums_to_one(a, b) && sums_to_one(c, d) && a != c {
                let e = ((a + n - c) % n) as i32;
                let mono = &z1(ni - e) * &z2(e);
                let all_nonzero = a * b * c * d != 0;
                if a * d == 0 || (all_nonzero && a > c) {
                    &(&v - &one) * &mono
                } else if b * c == 0 || (all_nonzero && a < c) {
                    &(&v * &(&v - &one)) * &mono
                } else {
                    zero
                }
            } else {
                zero
            }
        }
        (G, D, "-+-+") if a == 0 && b == 0 && c == 0 && d == 0 => z1_z2(),
        (G, D, "-++-") if a == 0 && b == 0 && sums_to_one(c, d) => {
            let (ra, rb) = (rep_1n(c, n), rep_1n(d, n));
            &one_minus_v() * &(&z1(ra) * &z2(rb - 1))
        }
        (G, D, "+--+") if c == 0 && d == 0 && sums_to_one(a, b) => {
            let (ra, rb) = (rep_1n(b, n), rep_1n(a, n));
            &one_minus_v() * &(&z1(ra - 1) * &z2(rb))
        }

        (D, D, "++++") if a == 0 && b == 0 && c == 0 && d == 0 => z1_vz2(),
        (D, D, "----") => {
            if a == b && b == c && c == d {
                z2_vz1()
            } else if a == d && b == c {
                let cc = ((a + n - b) % n) as i32;
                &one_minus_v() * &(&z1(ni - cc) * &z2(cc))
            } else if a == c && b == d {
                &g(a as i64 - b as i64) * &z1_z2()
            } else {
                zero
            }
        }
        (D, D, "+-+-") if a == 0 && c == 0 && b == d => &v * &z1_z2(),
        (D, D, "-++-") if b == 0 && c == 0 && a == d => {
            let ra = rep_1n(a, n);
            &one_minus_v() * &(&z1(ni - ra + 1) * &z2(ra - 1))
        }
        (D, D, "-+-+") if b == 0 && d == 0 && a == c => z1_z2(),
        (D, D, "+--+") if a == 0 && d == 0 && b == c => {
            let ra = rep_1n(b, n);
            &one_minus_v() * &(&z1(ra - 1) * &z2(ni - ra + 1))
        }

        (D, G, "++++") if a == 0 && c == 0 && b == d => z2_vnz1(),
        (D, G, "----") if b == 0 && d == 0 && a == c => z2_vnz1(),
        (D, G, "+-+-") if a == 0 && b == 0 && c == 0 && d == 0 => &z2n - &(&vp(ni + 1) * &z1n),
        (D, G, "-+-+") => {
            if a == c && b == d {
                if sums_to_one(a, b) {
                    &(&vp(ni - 1) * &z1n) - &z2n
                } else {
                    // Division by g(a+b-1) written as g(n-(a+b-1)) / v.
                    let k = a as i64 + b as i64 - 1;
                    &(&z2_vnz1() * &g(ni as i64 - k)) * &vp(-1)
                }
            } else if sums_to_one(a, b) && sums_to_one(c, d) && a != c {
                let e = ((c + n - a) % n) as i32;
                &(&one_minus_v() * &vp(e - 1)) * &(&z1(e) * &z2(ni - e))
            } else {
                zero
            }
        }
        (D, G, "-++-") if c == 0 && d == 0 && sums_to_one(a, b) => {
            let (ra, rb) = (rep_1n(b, n), rep_1n(a, n));
            &(&one_minus_v() * &vp(ra - 1)) * &(&z1(ra) * &z2(rb - 1))
        }
        (D, G, "+--+") if a == 0 && b == 0 && sums_to_one(c, d) => {
            let (ra, rb) = (rep_1n(c, n), rep_1n(d, n));
            &(&one_minus_v() * &vp(ra - 1)) * &(&z1(ra - 1) * &z2(rb))
        }

        (G, G, "++++") => {
            if a == b && b == c && c == d {
                z2_vz1()
            } else if a == c && b == d {
                &g(b as i64 - a as i64) * &z1_z2()
            } else if a == d && b == c {
                let cc = ((b + n - a) % n) as i32;
                &one_minus_v() * &(&z1(cc) * &z2(ni - cc))
            } else {
                zero
            }
        }
        (G, G, "----") if a == 0 && b == 0 && c == 0 && d == 0 => z1_vz2(),
        (G, G, "+-+-") if b == 0 && d == 0 && a == c => &v * &z1_z2(),
        (G, G, "-+-+") if a == 0 && c == 0 && b == d => z1_z2(),
        (G, G, "-++-") if a == 0 && d == 0 && b == c => {
            let ra = rep_1n(b, n);
            &one_minus_v() * &(&z1(ra) * &z2(ni - ra))
        }
        (G, G, "+--+") if b == 0 && c == 0 && a == d => {
            let ra = rep_1n(a, n);
            &one_minus_v() * &(&z1(ni - ra) * &z2(ra))
        }
        _ => zero,
    }
}

/// Tilted weight under an explicit leg order.
pub fn tilted_weight_with(
    x: RowType,
    y: RowType,
    p: &TiltedPattern,
    ring: Ring,
    v1: usize,
    v2: usize,
    order: TableLegOrder,
) -> CoeffElem {
    let legs = p.slots(order);
    tilted_weight_slots(
        x,
        y,
        legs.map(|l| l.spin),
        legs.map(|l| l.charge),
        ring,
        v1,
        v2,
    )
}

/// Tilted weight `R^{XY}` with `z1` on the X line and `z2` on the Y line
/// given by ring variables `v1`, `v2`.
pub fn tilted_weight_in(x: RowType, y: RowType, p: &TiltedPattern, ring: Ring, v1: usize, v2: usize) -> CoeffElem {
    tilted_weight_with(x, y, p, ring, v1, v2, TableLegOrder::InThenOut)
}

/// Tilted weight in the two-variable ring `(z1, z2)`.
pub fn tilted_weight(x: RowType, y: RowType, p: &TiltedPattern, n: u32) -> CoeffElem {
    tilted_weight_in(x, y, p, Ring::new(n, 2), 0, 1)
}

/// All `16 n^4` tilted patterns.
pub fn all_tilted_patterns(n: u32) -> impl Iterator<Item = TiltedPattern> {
    (0..16u32).flat_map(move |bits| {
        let s = |k: u32| if bits >> k & 1 == 1 { Spin::Minus } else { Spin::Plus };
        let spins = [s(3), s(2), s(1), s(0)];
        (0..n.pow(4)).map(move |code| {
            let q = [code % n, code / n % n, code / n / n % n, code / n / n / n];
            TiltedPattern::from_slots([0, 1, 2, 3].map(|i| Leg::new(spins[i], q[i])))
        })
    })
}

// ---------------------------------------------------------------------------
// Calibration.

/// The fully labelled Γ state for `λ = (3,2,0)`, `n = 2`: spins left to right
/// and the printed charges on every horizontal edge.
pub struct ReferenceState {
    pub horizontal: [&'static str; 3],
    pub vertical: [&'static str; 4],
    pub charges: [[u32; 7]; 3],
}

pub const REFERENCE_STATE: ReferenceState = ReferenceState {
    horizontal: ["+++-++-", "+------", "++++---"],
    vertical: ["-+-++-", "-++-++", "+++-++", "++++++"],
    charges: [[1, 0, 1, 0, 0, 1, 0], [1, 0, 0, 0, 0, 0, 0], [0, 1, 0, 1, 0, 0, 0]],
};

#[derive(Clone, Debug, Serialize)]
pub struct CalibrationReport {
    pub slot_convention: SlotConvention,
    pub leg_order: TableLegOrder,
    pub reference_vertices: usize,
    pub ybe_boundaries: usize,
}

/// Check a slot convention against the reference state: the spins must be
/// admissible, derived charges must match the printed ones, and every
/// vertex must have a nonzero weight.
pub fn check_reference_state(conv: SlotConvention) -> Result<usize, CalibrationError> {
    use crate::lattice::{build_standard_system, Partition};
    let lambda = Partition::new(vec![3, 2, 0]).expect("valid partition");
    let spec = build_standard_system(&lambda, 3, &[RowType::Gamma; 3], 2)
        .map_err(|e| CalibrationError::NotAdmissible(e.to_string()))?;
    let parse = |s: &str| parse_spins(s).expect("reference spins");
    let spins = SpinState {
        horizontal: REFERENCE_STATE.horizontal.iter().map(|s| parse(s)).collect(),
        vertical: REFERENCE_STATE.vertical.iter().map(|s| parse(s)).collect(),
    };
    if !spins.is_admissible(&spec) {
        return Err(CalibrationError::NotAdmissible("ice rule or boundary violated".into()));
    }
    let state = derive_charges(&spec, spins);
    for (row, printed) in REFERENCE_STATE.charges.iter().enumerate() {
        for (edge, (&p, &d)) in printed.iter().zip(&state.charges[row]).enumerate() {
            if p != d {
                return Err(CalibrationError::ChargeMismatch {
                    row,
                    edge,
                    derived: d,
                    printed: p,
                });
            }
        }
    }
    let ring = Ring::new(2, 3);
    let mut count = 0;
    for (row, r) in spec.rows().iter().enumerate() {
        for x in 0..spec.columns() {
            let p = VertexPattern::new(state.spins.vertex(row, x), state.vertex_charges(row, x));
            if vertex_weight_with(r.kind, &p, ring, r.param, conv).is_zero() {
                return Err(CalibrationError::ZeroVertex { row, column: spec.label(x) });
            }
            count += 1;
        }
    }
    Ok(count)
}

/// Run both calibration checks for the built-in conventions.
pub fn calibrate_conventions() -> Result<CalibrationReport, CalibrationError> {
    let reference_vertices = check_reference_state(SlotConvention::CALIBRATED)?;
    let report = crate::verify::verify_ybe(RowType::Gamma, RowType::Gamma, 1);
    if !report.passed() {
        return Err(CalibrationError::YangBaxter {
            failures: report.failures.len(),
        });
    }
    Ok(CalibrationReport {
        slot_convention: SlotConvention::CALIBRATED,
        leg_order: TableLegOrder::InThenOut,
        reference_vertices,
        ybe_boundaries: report.cases_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Spin::{Minus as M, Plus as P};

    fn vp(s: &str, cl: u32, cr: u32) -> VertexPattern {
        let v = parse_spins(s).unwrap();
        VertexPattern::new((v[0], v[1], v[2], v[3]), (cl, cr))
    }

    fn parse(s: &str, ring: Ring) -> CoeffElem {
        CoeffElem::parse(s, ring).unwrap()
    }

    #[test]
    fn gamma_entries() {
        let ring = Ring::new(3, 1);
        assert_eq!(gamma_weight(&vp("+-+-", 0, 2), ring, 0), CoeffElem::g(ring, 2));
        assert_eq!(gamma_weight(&vp("-++-", 0, 0), ring, 0), parse("(1-v)*z1", ring));
        assert!(gamma_weight(&vp("-++-", 2, 0), ring, 0).is_zero());
        assert_eq!(gamma_weight(&vp("++++", 2, 1), ring, 0), CoeffElem::one(ring));
        assert!(gamma_weight(&vp("++++", 1, 1), ring, 0).is_zero());
        assert_eq!(gamma_weight(&vp("+--+", 1, 0), ring, 0), CoeffElem::one(ring));
    }

    #[test]
    fn delta_entries() {
        let ring = Ring::new(3, 1);
        assert_eq!(delta_weight(&vp("----", 1, 2), ring, 0), parse("g1*z1", ring));
        assert_eq!(delta_weight(&vp("+--+", 0, 1), ring, 0), CoeffElem::one(ring));
        assert!(delta_weight(&vp("++++", 0, 2), ring, 0).is_zero());
        assert_eq!(delta_weight(&vp("-+-+", 2, 0), ring, 0), parse("z1", ring));
    }

    #[test]
    fn charge_vanishing_on_unlabelled_legs() {
        for n in 1..=4 {
            let ring = Ring::new(n, 1);
            for p in all_vertex_patterns(n) {
                if !gamma_weight(&p, ring, 0).is_zero() {
                    assert!(!(p.left == M && p.left_charge != 0));
                    assert!(!(p.right == M && p.right_charge != 0));
                }
                if !delta_weight(&p, ring, 0).is_zero() {
                    assert!(!(p.left == P && p.left_charge != 0));
                    assert!(!(p.right == P && p.right_charge != 0));
                }
            }
        }
    }

    #[test]
    fn n1_gamma_is_six_vertex() {
        let ring = Ring::new(1, 1);
        let pats = nonzero_vertex_patterns(RowType::Gamma, 1);
        assert_eq!(pats.len(), 6);
        assert_eq!(gamma_weight(&vp("+-+-", 0, 0), ring, 0), -CoeffElem::v(ring));
    }

    #[test]
    fn tilted_examples() {
        use RowType::{Delta as D, Gamma as G};
        let ring = Ring::new(2, 2);
        let pat = |s: &str, q: [u32; 4]| {
            let sp = parse_spins(s).unwrap();
            TiltedPattern::from_slots([0, 1, 2, 3].map(|i| Leg::new(sp[i], q[i])))
        };
        assert_eq!(tilted_weight(G, D, &pat("++++", [1, 0, 1, 0]), 2), parse("z1^2 - v*z2^2", ring));
        assert_eq!(tilted_weight(D, G, &pat("+-+-", [0; 4]), 2), parse("z2^2 - v^3*z1^2", ring));
        assert_eq!(tilted_weight(D, D, &pat("----", [1; 4]), 2), parse("z2^2 - v*z1^2", ring));
        assert_eq!(tilted_weight(G, G, &pat("----", [0; 4]), 2), parse("z1^2 - v*z2^2", ring));
        assert!(tilted_weight(G, G, &pat("----", [1, 0, 0, 0]), 2).is_zero());
        // Charges with a+b-1 = 1 at n = 3 give g(2)/v.
        let r3 = Ring::new(3, 2);
        let w = tilted_weight(D, G, &pat("-+-+", [1, 1, 1, 1]), 3);
        assert_eq!(w, parse("(z2^3 - v^3*z1^3)*g2*v^-1", r3));
        assert_eq!(&w * &CoeffElem::g(r3, 1), parse("z2^3 - v^3*z1^3", r3));
    }

    #[test]
    fn reference_state_calibrates() {
        assert_eq!(check_reference_state(SlotConvention::CALIBRATED).unwrap(), 18);
        assert!(check_reference_state(SlotConvention::CLOCKWISE_FROM_TOP).is_err());
        assert!(check_reference_state(SlotConvention::SWAPPED_CHARGES).is_err());
    }
}
