//! Machine checks of the lattice-model identities: the Yang-Baxter equation
//! for all four tilted vertices, two-row commutation, Γ/Δ duality, the
//! intermediate steps of both proofs, and the `n = 1` Schur cross-check.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::boltzmann::{tilted_weight_with, Leg, TableLegOrder, TiltedPattern};
use crate::coeff::{CoeffElem, Rational, Ring};
use crate::engine::{partition_function, row_transfer_matrix_in, system_ring, RowWeights};
use crate::error::Error;
use crate::lattice::{
    build_standard_system, build_two_row, build_uniform_system, enumerate_admissible, ColumnSet, Partition, Row,
    RowType, Spin, SystemSpec, TwoRowOrder,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub case: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub cases_checked: usize,
    pub failures: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>) -> Self {
        VerificationReport {
            identity: identity.into(),
            cases_checked: 0,
            failures: Vec::new(),
            notes: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn check(&mut self, case: impl FnOnce() -> String, lhs: &CoeffElem, rhs: &CoeffElem) -> bool {
        self.cases_checked += 1;
        if lhs == rhs {
            return true;
        }
        self.failures.push(Counterexample {
            case: case(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        });
        false
    }

    /// Fold another report's counts and failures into this one.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.cases_checked += other.cases_checked;
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
        self.elapsed += other.elapsed;
    }

    fn timed(mut self, start: Instant) -> Self {
        self.elapsed = start.elapsed();
        self
    }
}

// ---------------------------------------------------------------------------
// Yang-Baxter equation.

/// Boundary of the two three-vertex systems: six spins and four charges.
/// `sigma`/`a` enter on the X line (lower left), `tau`/`b` on the Y line
/// (upper left); `beta` is on top, `alpha` at the bottom; `theta`/`c` leave
/// at the upper right and `rho`/`d` at the lower right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct YbeBoundary {
    pub sigma: Spin,
    pub tau: Spin,
    pub beta: Spin,
    pub theta: Spin,
    pub rho: Spin,
    pub alpha: Spin,
    pub charges: [u32; 4],
}

impl YbeBoundary {
    pub fn from_index(idx: usize, n: u32) -> Self {
        let n4 = (n as usize).pow(4);
        let (spin_bits, code) = (idx / n4, (idx % n4) as u32);
        let s = |k: usize| if spin_bits >> k & 1 == 1 { Spin::Minus } else { Spin::Plus };
        YbeBoundary {
            sigma: s(5),
            tau: s(4),
            beta: s(3),
            theta: s(2),
            rho: s(1),
            alpha: s(0),
            charges: [code % n, code / n % n, code / n / n % n, code / n / n / n],
        }
    }

    pub fn label(&self) -> String {
        let [a, b, c, d] = self.charges;
        format!(
            "sigma={} tau={} beta={} theta={} rho={} alpha={} a={a} b={b} c={c} d={d}",
            self.sigma, self.tau, self.beta, self.theta, self.rho, self.alpha
        )
    }
}

type LegPair = (Leg, Leg);

struct TiltedIndex {
    by_in: HashMap<LegPair, Vec<(Leg, Leg, CoeffElem)>>,
    by_out: HashMap<LegPair, Vec<(Leg, Leg, CoeffElem)>>,
}

fn tilted_index(x: RowType, y: RowType, ring: Ring, v1: usize, v2: usize, order: TableLegOrder) -> TiltedIndex {
    let mut by_in: HashMap<LegPair, Vec<_>> = HashMap::new();
    let mut by_out: HashMap<LegPair, Vec<_>> = HashMap::new();
    for p in crate::boltzmann::all_tilted_patterns(ring.modulus()) {
        let w = tilted_weight_with(x, y, &p, ring, v1, v2, order);
        if w.is_zero() {
            continue;
        }
        by_in.entry((p.sw, p.nw)).or_default().push((p.ne, p.se, w.clone()));
        by_out.entry((p.ne, p.se)).or_default().push((p.sw, p.nw, w));
    }
    TiltedIndex { by_in, by_out }
}

/// Both sides of the Yang-Baxter equation for one boundary.
struct YbeSides<'a> {
    ring: Ring,
    r: &'a TiltedIndex,
    wx: &'a RowWeights,
    wy: &'a RowWeights,
}

impl YbeSides<'_> {
    /// Tilted vertex on the left of an X-over-Y column.
    fn left(&self, bd: &YbeBoundary) -> CoeffElem {
        let [a, b, c, d] = bd.charges;
        let mut acc = CoeffElem::zero(self.ring);
        let key = (Leg::new(bd.sigma, a), Leg::new(bd.tau, b));
        for (ne, se, w) in self.r.by_in.get(&key).into_iter().flatten() {
            for m in Spin::BOTH {
                let top = self.wx.get((ne.spin, bd.beta, bd.theta, m), (ne.charge, c));
                if top.is_zero() {
                    continue;
                }
                let bot = self.wy.get((se.spin, m, bd.rho, bd.alpha), (se.charge, d));
                if bot.is_zero() {
                    continue;
                }
                acc += &(w * top) * bot;
            }
        }
        acc
    }

    /// Y-over-X column with the tilted vertex on the right.
    fn right(&self, bd: &YbeBoundary) -> CoeffElem {
        let [a, b, c, d] = bd.charges;
        let mut acc = CoeffElem::zero(self.ring);
        let key = (Leg::new(bd.theta, c), Leg::new(bd.rho, d));
        for (sw, nw, w) in self.r.by_out.get(&key).into_iter().flatten() {
            for m in Spin::BOTH {
                let top = self.wy.get((bd.tau, bd.beta, nw.spin, m), (b, nw.charge));
                if top.is_zero() {
                    continue;
                }
                let bot = self.wx.get((bd.sigma, m, sw.spin, bd.alpha), (a, sw.charge));
                if bot.is_zero() {
                    continue;
                }
                acc += &(top * bot) * w;
            }
        }
        acc
    }
}

/// Yang-Baxter equation for `R^{XY}` under an explicit table leg order.
pub fn verify_ybe_with(x: RowType, y: RowType, n: u32, order: TableLegOrder) -> VerificationReport {
    let start = Instant::now();
    let ring = Ring::new(n, 2);
    let r = tilted_index(x, y, ring, 0, 1, order);
    let wx = RowWeights::new(x, ring, 0);
    let wy = RowWeights::new(y, ring, 1);
    let sides = YbeSides { ring, r: &r, wx: &wx, wy: &wy };
    let total = 64 * (n as usize).pow(4);
    let outcomes: Vec<(bool, Option<Counterexample>)> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let bd = YbeBoundary::from_index(idx, n);
            let (l, rr) = (sides.left(&bd), sides.right(&bd));
            let nonzero = !l.is_zero() || !rr.is_zero();
            let failure = (l != rr).then(|| Counterexample {
                case: bd.label(),
                lhs: l.to_string(),
                rhs: rr.to_string(),
            });
            (nonzero, failure)
        })
        .collect();
    let nonzero = outcomes.iter().filter(|(nz, _)| *nz).count();
    let mut rep = VerificationReport::new(format!("ybe {}{} n={n}", x.letter(), y.letter()));
    rep.cases_checked = total;
    rep.failures = outcomes.into_iter().filter_map(|(_, f)| f).collect();
    rep.notes.push(format!("{nonzero} boundaries have a nonzero partition function"));
    rep.timed(start)
}

/// Yang-Baxter equation for `R^{XY}` over all `64 n^4` boundaries.
pub fn verify_ybe(x: RowType, y: RowType, n: u32) -> VerificationReport {
    verify_ybe_with(x, y, n, TableLegOrder::InThenOut)
}

// ---------------------------------------------------------------------------
// Two-row commutation and duality.

/// `Z(ΓΔ; z1 on top) = Z(ΔΓ; z2 on top)` for one boundary.
pub fn verify_two_row(top: &ColumnSet, bottom: &ColumnSet, columns: usize, n: u32) -> Result<VerificationReport, Error> {
    let start = Instant::now();
    let gd = build_two_row(top, bottom, TwoRowOrder::GammaDelta, columns, n)?;
    let dg = build_two_row(top, bottom, TwoRowOrder::DeltaGamma, columns, n)?;
    let (l, r) = (partition_function(&gd).value, partition_function(&dg).value);
    let mut rep = VerificationReport::new(format!("two-row commutation n={n}"));
    rep.check(|| format!("M={columns} top={top} bottom={bottom}"), &l, &r);
    Ok(rep.timed(start))
}

/// Every flux-valid boundary with `columns <= max_columns` and at most
/// `max_top` top Minus columns.
pub fn two_row_boundaries(max_columns: usize, max_top: usize) -> Vec<(usize, ColumnSet, ColumnSet)> {
    let mut out = Vec::new();
    for m in 1..=max_columns {
        for k in 2..=max_top.min(m) {
            for top in ColumnSet::all_of_size(m, k) {
                for bottom in ColumnSet::all_of_size(m, k - 2) {
                    out.push((m, top.clone(), bottom));
                }
            }
        }
    }
    out
}

/// Two-row commutation over a whole grid of boundaries.
pub fn verify_two_row_grid(max_columns: usize, max_top: usize, n: u32) -> VerificationReport {
    let start = Instant::now();
    let parts: Vec<VerificationReport> = two_row_boundaries(max_columns, max_top)
        .par_iter()
        .map(|(m, t, b)| verify_two_row(t, b, *m, n).expect("grid boundaries are flux-valid"))
        .collect();
    let mut rep = VerificationReport::new(format!("two-row commutation M<={max_columns} |top|<={max_top} n={n}"));
    parts.into_iter().for_each(|p| rep.absorb(p));
    rep.timed(start)
}

/// Entrywise commutation of the Γ and Δ row transfer matrices on
/// `columns` columns (the two-row identity for every boundary at once).
pub fn verify_transfer_commutation(columns: usize, n: u32) -> VerificationReport {
    let start = Instant::now();
    let ring = Ring::new(n, 2);
    let tg = row_transfer_matrix_in(RowType::Gamma, 0, columns, ring);
    let td = row_transfer_matrix_in(RowType::Delta, 1, columns, ring);
    let product = |a: &crate::engine::TransferMatrix, b: &crate::engine::TransferMatrix| {
        let mut out: BTreeMap<(u64, u64), CoeffElem> = BTreeMap::new();
        for ((t, m), x) in &a.entries {
            for ((m2, bo), y) in &b.entries {
                if m == m2 {
                    *out.entry((*t, *bo)).or_insert_with(|| CoeffElem::zero(ring)) += x * y;
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    };
    let gd = product(&tg, &td);
    let dg = product(&td, &tg);
    let mut rep = VerificationReport::new(format!("transfer commutation M={columns} n={n}"));
    let keys: std::collections::BTreeSet<_> = gd.keys().chain(dg.keys()).copied().collect();
    let zero = CoeffElem::zero(ring);
    for k in keys {
        let (l, r) = (gd.get(&k).unwrap_or(&zero), dg.get(&k).unwrap_or(&zero));
        rep.check(|| format!("top mask {:#b} bottom mask {:#b}", k.0, k.1), l, r);
    }
    rep.timed(start)
}

/// `Z(S^Γ_{z,λ}) = Z(S^Δ_{z^σ,λ})`.
pub fn verify_duality(lambda: &Partition, r: usize, n: u32) -> Result<VerificationReport, Error> {
    let start = Instant::now();
    let g = build_uniform_system(lambda, r, RowType::Gamma, false, n)?;
    let d = build_uniform_system(lambda, r, RowType::Delta, true, n)?;
    let (l, rr) = (partition_function(&g).value, partition_function(&d).value);
    let mut rep = VerificationReport::new(format!("duality n={n}"));
    rep.check(|| format!("lambda={lambda} r={r}"), &l, &rr);
    Ok(rep.timed(start))
}

/// Duality for every `λ` with `r` parts and `λ_1 <= max_part`.
pub fn verify_duality_grid(max_part: u32, r: usize, n: u32) -> VerificationReport {
    let start = Instant::now();
    let parts: Vec<_> = Partition::all_bounded(r, max_part)
        .par_iter()
        .map(|l| verify_duality(l, r, n).expect("bounded partitions are valid"))
        .collect();
    let mut rep = VerificationReport::new(format!("duality lambda_1<={max_part} r={r} n={n}"));
    parts.into_iter().for_each(|p| rep.absorb(p));
    rep.timed(start)
}

// ---------------------------------------------------------------------------
// Proof steps.

/// Changing the bottom row of `S^Γ` to Δ ice leaves `Z` unchanged.
pub fn verify_bottom_row_swap(lambda: &Partition, r: usize, n: u32) -> Result<VerificationReport, Error> {
    let start = Instant::now();
    let g = build_uniform_system(lambda, r, RowType::Gamma, false, n)?;
    let swapped = g.with_row(r - 1, Row::new(RowType::Delta, r - 1));
    let mut rep = VerificationReport::new(format!("bottom-row swap n={n}"));
    rep.check(
        || format!("lambda={lambda} r={r}"),
        &partition_function(&g).value,
        &partition_function(&swapped).value,
    );
    Ok(rep.timed(start))
}

/// A system where swapping a non-bottom row changes `Z`.
#[derive(Clone, Debug, Serialize)]
pub struct SwapWitness {
    pub lambda: Partition,
    pub r: usize,
    pub n: u32,
    pub row: usize,
    pub original: String,
    pub swapped: String,
}

/// Search the grid for a non-bottom row whose Γ to Δ swap changes `Z`.
pub fn find_non_bottom_swap_witness(max_part: u32, max_rows: usize, max_n: u32) -> Option<SwapWitness> {
    for n in 1..=max_n {
        for r in 2..=max_rows {
            for lambda in Partition::all_bounded(r, max_part).into_iter().rev() {
                let g = build_uniform_system(&lambda, r, RowType::Gamma, false, n).ok()?;
                let z = partition_function(&g).value;
                for row in 0..r - 1 {
                    let s = g.with_row(row, Row::new(RowType::Delta, row));
                    let z2 = partition_function(&s).value;
                    if z2 != z {
                        return Some(SwapWitness {
                            lambda,
                            r,
                            n,
                            row,
                            original: z.to_string(),
                            swapped: z2.to_string(),
                        });
                    }
                }
            }
        }
    }
    None
}

/// Every state of `S^Γ` has exactly one Minus vertical edge directly above
/// the bottom boundary.
pub fn verify_one_minus_above_bottom(lambda: &Partition, r: usize, n: u32) -> Result<VerificationReport, Error> {
    let start = Instant::now();
    let spec = build_uniform_system(lambda, r, RowType::Gamma, false, n)?;
    let mut rep = VerificationReport::new(format!("one Minus above bottom n={n}"));
    for (k, s) in enumerate_admissible(&spec).enumerate() {
        rep.cases_checked += 1;
        let count = s.spins.minus_count(r - 1);
        if count != 1 {
            rep.failures.push(Counterexample {
                case: format!("lambda={lambda} r={r} state #{k}"),
                lhs: count.to_string(),
                rhs: "1".into(),
            });
        }
    }
    Ok(rep.timed(start))
}

/// Result of sliding the tilted vertex through a two-row system.
#[derive(Clone, Debug, Serialize)]
pub struct TrainTrace {
    pub report: VerificationReport,
    /// Attachment factor in the tilted vertex's own labels (`z1` on its X line).
    pub factor_tilted: String,
    /// The same factor in the two-row system's labels.
    pub factor_system: String,
    /// `Z_k` with the tilted vertex at cut `k` (0 = left end).
    pub positions: Vec<String>,
    pub z_gamma_delta: String,
    pub z_delta_gamma: String,
}

type DpState = BTreeMap<(Leg, Leg), CoeffElem>;

/// The train argument for one boundary. The ΔΓ tilted vertex (X line = Δ row,
/// `z2`; Y line = Γ row, `z1`) is attached at the right of `S^{ΓΔ}` and moved
/// cut by cut to the left end; columns left of the vertex are ΓΔ, columns
/// right of it ΔΓ.
pub fn train_trace(top: &ColumnSet, bottom: &ColumnSet, columns: usize, n: u32) -> Result<TrainTrace, Error> {
    let start = Instant::now();
    let gd = build_two_row(top, bottom, TwoRowOrder::GammaDelta, columns, n)?;
    let dg = build_two_row(top, bottom, TwoRowOrder::DeltaGamma, columns, n)?;
    let ring = system_ring(&gd);
    let (z1, z2) = (0, 1);
    let wg = RowWeights::new(RowType::Gamma, ring, z1);
    let wd = RowWeights::new(RowType::Delta, ring, z2);
    let (ts, bs) = (gd.top_boundary(), gd.bottom_boundary());

    let tilted = |p: &TiltedPattern| {
        tilted_weight_with(RowType::Delta, RowType::Gamma, p, ring, z2, z1, TableLegOrder::InThenOut)
    };
    let legs = |spin: Spin| (0..n).map(move |c| Leg::new(spin, c));

    let apply_r = |states: &DpState| {
        let mut out = DpState::new();
        for ((nw, sw), w) in states {
            for ne in legs(Spin::Plus).chain(legs(Spin::Minus)) {
                for se in legs(Spin::Plus).chain(legs(Spin::Minus)) {
                    let f = tilted(&TiltedPattern { sw: *sw, nw: *nw, ne, se });
                    if !f.is_zero() {
                        *out.entry((ne, se)).or_insert_with(|| CoeffElem::zero(ring)) += w * &f;
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    };
    let apply_column = |states: &DpState, x: usize, upper: &RowWeights, lower: &RowWeights| {
        let mut out = DpState::new();
        for ((tl, bl), w) in states {
            for m in Spin::BOTH {
                for tr in legs(Spin::Plus).chain(legs(Spin::Minus)) {
                    let fu = upper.get((tl.spin, ts[x], tr.spin, m), (tl.charge, tr.charge));
                    if fu.is_zero() {
                        continue;
                    }
                    let wu = w * fu;
                    for br in legs(Spin::Plus).chain(legs(Spin::Minus)) {
                        let fl = lower.get((bl.spin, m, br.spin, bs[x]), (bl.charge, br.charge));
                        if !fl.is_zero() {
                            *out.entry((tr, br)).or_insert_with(|| CoeffElem::zero(ring)) += &wu * fl;
                        }
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    };

    let mut positions = Vec::with_capacity(columns + 1);
    for k in 0..=columns {
        let mut states: DpState = legs(Spin::Plus)
            .map(|c| ((c, Leg::new(Spin::Plus, 0)), CoeffElem::one(ring)))
            .collect();
        for x in 0..columns {
            if x == k {
                states = apply_r(&states);
            }
            states = if x < k {
                apply_column(&states, x, &wg, &wd)
            } else {
                apply_column(&states, x, &wd, &wg)
            };
        }
        if k == columns {
            states = apply_r(&states);
        }
        let mut z = CoeffElem::zero(ring);
        for ((t, b), w) in &states {
            if t.spin == Spin::Minus && *b == Leg::new(Spin::Minus, 0) {
                z += w;
            }
        }
        positions.push(z);
    }

    let z_gd = partition_function(&gd).value;
    let z_dg = partition_function(&dg).value;
    // z2^n - v^n z1^n with z1 on the tilted vertex's X line (the Δ row).
    let nn = n as i32;
    let factor = &CoeffElem::z_pow(ring, z1, nn) - &(&CoeffElem::v_pow(ring, nn) * &CoeffElem::z_pow(ring, z2, nn));

    let mut rep = VerificationReport::new(format!("train trace n={n}"));
    let label = format!("M={columns} top={top} bottom={bottom}");
    for c in 0..n {
        let all = |s: Spin, q: [u32; 4]| TiltedPattern {
            sw: Leg::new(s, q[0]),
            nw: Leg::new(s, q[1]),
            ne: Leg::new(s, q[2]),
            se: Leg::new(s, q[3]),
        };
        rep.check(|| format!("{label}: all-Minus entry, charge {c}"), &tilted(&all(Spin::Minus, [c, 0, c, 0])), &factor);
        rep.check(|| format!("{label}: all-Plus entry, charge {c}"), &tilted(&all(Spin::Plus, [0, c, 0, c])), &factor);
    }
    rep.check(|| format!("{label}: right end"), &positions[columns], &(&factor * &z_gd));
    rep.check(|| format!("{label}: left end"), &positions[0], &(&factor * &z_dg));
    for k in (0..columns).rev() {
        rep.check(
            || format!("{label}: exchange across column {}", gd.label(k)),
            &positions[k],
            &positions[k + 1],
        );
    }
    rep.check(|| format!("{label}: resulting identity"), &z_gd, &z_dg);
    rep.notes.push(
        "the identity factor*(Z(GD) - Z(DG)) = 0 is checked symbolically; the factor is a nonzero polynomial".into(),
    );
    Ok(TrainTrace {
        report: rep.timed(start),
        factor_tilted: format!("z2^{n} - v^{n}*z1^{n}"),
        factor_system: factor.to_string(),
        positions: positions.iter().map(ToString::to_string).collect(),
        z_gamma_delta: z_gd.to_string(),
        z_delta_gamma: z_dg.to_string(),
    })
}

// ---------------------------------------------------------------------------
// Schur polynomials and the n = 1 cross-check.

fn permutations(r: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, bool)>) {
        let r = used.len();
        if cur.len() == r {
            let inversions = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).filter(|&(i, j)| cur[i] > cur[j]).count();
            out.push((cur.clone(), inversions % 2 == 1));
            return;
        }
        for k in 0..r {
            if !used[k] {
                used[k] = true;
                cur.push(k);
                rec(cur, used, out);
                cur.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; r], &mut out);
    out
}

/// `det(z_i^{e_j})` for an exponent row `e`, in the ring `Ring(1, r)`.
fn alternant(exps: &[i32], ring: Ring) -> CoeffElem {
    let r = exps.len();
    let mut det = CoeffElem::zero(ring);
    for (perm, odd) in permutations(r) {
        let mut z = vec![0; r];
        for (i, &j) in perm.iter().enumerate() {
            z[i] = exps[j];
        }
        let sign = if odd { -Rational::one() } else { Rational::one() };
        det += CoeffElem::monomial(ring, sign, &z, 0, &[]).expect("no g-symbols");
    }
    det
}

/// `s_λ(z_1..z_r)` as a ratio of alternants.
pub fn schur_polynomial(lambda: &Partition, r: usize) -> Result<CoeffElem, Error> {
    let p = lambda.padded(r)?;
    let ring = Ring::new(1, r);
    let num: Vec<i32> = (0..r).map(|j| (p.parts()[j] as usize + r - 1 - j) as i32).collect();
    let den: Vec<i32> = (0..r).map(|j| (r - 1 - j) as i32).collect();
    let (a, d) = (alternant(&num, ring), alternant(&den, ring));
    a.div_exact(&d)
        .ok_or_else(|| Error::Usage("alternant division left a remainder".into()))
}

/// `s_λ` as a sum over semistandard tableaux with entries `1..=r`.
pub fn schur_via_tableaux(lambda: &Partition, r: usize) -> Result<CoeffElem, Error> {
    let p = lambda.padded(r)?;
    let ring = Ring::new(1, r);
    let cells: Vec<(usize, usize)> = p
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, &l)| (0..l as usize).map(move |j| (i, j)))
        .collect();
    let mut grid: Vec<Vec<usize>> = p.parts().iter().map(|&l| vec![0; l as usize]).collect();
    let mut total = CoeffElem::zero(ring);
    fn fill(k: usize, cells: &[(usize, usize)], grid: &mut Vec<Vec<usize>>, r: usize, ring: Ring, total: &mut CoeffElem) {
        if k == cells.len() {
            let mut z = vec![0i32; r];
            for row in grid.iter() {
                for &e in row {
                    z[e - 1] += 1;
                }
            }
            *total += CoeffElem::monomial(ring, Rational::one(), &z, 0, &[]).expect("no g-symbols");
            return;
        }
        let (i, j) = cells[k];
        let lo_row = if j > 0 { grid[i][j - 1] } else { 1 };
        let lo_col = if i > 0 { grid[i - 1][j] + 1 } else { 1 };
        for e in lo_row.max(lo_col)..=r {
            grid[i][j] = e;
            fill(k + 1, cells, grid, r, ring, total);
        }
        grid[i][j] = 0;
    }
    fill(0, &cells, &mut grid, r, ring, &mut total);
    Ok(total)
}

/// Which roots appear in the deformation factor `∏_{i<j}(1 - v z_a/z_b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RootOrientation {
    /// `(a, b) = (j, i)`: `∏(1 - v z_j/z_i)`. Matches the Γ weights.
    Descending,
    /// `(a, b) = (i, j)`: `∏(1 - v z_i/z_j)`.
    Ascending,
}

/// The deformation factor cleared of denominators, and the monomial it was
/// multiplied by: `(u * ∏(1 - v z_a/z_b), u)`.
pub fn deformation_factor(r: usize, orientation: RootOrientation) -> (CoeffElem, CoeffElem) {
    let ring = Ring::new(1, r);
    let mut prod = CoeffElem::one(ring);
    let mut shift = CoeffElem::one(ring);
    for i in 0..r {
        for j in i + 1..r {
            let (a, b) = match orientation {
                RootOrientation::Descending => (j, i),
                RootOrientation::Ascending => (i, j),
            };
            let zb = CoeffElem::z(ring, b);
            prod = &prod * &(&zb - &(&CoeffElem::v(ring) * &CoeffElem::z(ring, a)));
            shift = &shift * &zb;
        }
    }
    (prod, shift)
}

#[derive(Clone, Debug, Serialize)]
pub struct TokuyamaResult {
    pub lambda: Partition,
    pub r: usize,
    pub partition_function: String,
    pub schur: String,
    /// `Z / (∏(1 - v z_a/z_b) s_λ)` when it is a single monomial.
    pub monomial: Option<String>,
    pub diagnostic: Option<String>,
    pub schur_matches_tableaux: bool,
    pub v_zero_reduces_to_schur: bool,
}

impl TokuyamaResult {
    pub fn passed(&self) -> bool {
        self.monomial.is_some() && self.schur_matches_tableaux && self.v_zero_reduces_to_schur
    }
}

/// Compare `Z(S^Γ_λ)` at `n = 1` with the deformed Schur polynomial.
pub fn tokuyama_crosscheck_with(lambda: &Partition, r: usize, orientation: RootOrientation) -> Result<TokuyamaResult, Error> {
    let spec = build_standard_system(lambda, r, &vec![RowType::Gamma; r], 1)?;
    let q = partition_function(&spec).value;
    let s = schur_polynomial(lambda, r)?;
    let s_tab = schur_via_tableaux(lambda, r)?;
    let (d, shift) = deformation_factor(r, orientation);
    let denom = &d * &s;
    let (monomial, diagnostic) = match q.div_exact(&denom) {
        Some(quot) if quot.is_monomial() => (Some(&quot * &shift), None),
        Some(quot) => (None, Some(format!("ratio is not a monomial: ({quot}) * ({shift})"))),
        None => (None, Some(format!("ratio is not a polynomial: ({q}) * ({shift}) / ({denom})"))),
    };
    let v_zero_reduces_to_schur = match (&monomial, q.at_v_zero()) {
        (Some(m), Some(q0)) => m.at_v_zero().is_some_and(|m0| q0 == &m0 * &s),
        _ => false,
    };
    Ok(TokuyamaResult {
        lambda: lambda.clone(),
        r,
        partition_function: q.to_string(),
        schur: s.to_string(),
        monomial: monomial.map(|m| m.to_string()),
        diagnostic,
        schur_matches_tableaux: s == s_tab,
        v_zero_reduces_to_schur,
    })
}

pub fn tokuyama_crosscheck(lambda: &Partition, r: usize) -> Result<TokuyamaResult, Error> {
    tokuyama_crosscheck_with(lambda, r, RootOrientation::Descending)
}

#[derive(Clone, Debug, Serialize)]
pub struct TokuyamaGrid {
    pub r: usize,
    pub max_part: u32,
    pub results: Vec<TokuyamaResult>,
    /// The common normalization monomial, if every `λ` gave the same one.
    pub common_monomial: Option<String>,
}

impl TokuyamaGrid {
    pub fn passed(&self) -> bool {
        self.common_monomial.is_some() && self.results.iter().all(TokuyamaResult::passed)
    }
}

/// Cross-check for every `λ` with `r` parts and `λ_1 <= max_part`, and test
/// that the normalization monomial does not depend on `λ`.
pub fn tokuyama_grid(r: usize, max_part: u32) -> Result<TokuyamaGrid, Error> {
    let results = Partition::all_bounded(r, max_part)
        .par_iter()
        .map(|l| tokuyama_crosscheck(l, r))
        .collect::<Result<Vec<_>, _>>()?;
    let first = results.first().and_then(|t| t.monomial.clone());
    let common_monomial = first.filter(|m| results.iter().all(|t| t.monomial.as_ref() == Some(m)));
    Ok(TokuyamaGrid {
        r,
        max_part,
        results,
        common_monomial,
    })
}

/// The `SystemSpec`s behind a duality check, exposed for callers that want
/// the two partition functions themselves.
pub fn duality_pair(lambda: &Partition, r: usize, n: u32) -> Result<(SystemSpec, SystemSpec), Error> {
    Ok((
        build_uniform_system(lambda, r, RowType::Gamma, false, n)?,
        build_uniform_system(lambda, r, RowType::Delta, true, n)?,
    ))
}
