//! Lattice geometry, boundary conditions and admissible states.
//!
//! Columns are labelled right to left from 0. Internally
//! every per-row array runs left to right, so position `x` carries column
//! label `M - 1 - x`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spin {
    Plus,
    Minus,
}

impl Spin {
    pub fn is_minus(self) -> bool {
        self == Spin::Minus
    }

    pub fn flip(self) -> Spin {
        match self {
            Spin::Plus => Spin::Minus,
            Spin::Minus => Spin::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Spin::Plus => '+',
            Spin::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Spin> {
        match c {
            '+' => Some(Spin::Plus),
            '-' => Some(Spin::Minus),
            _ => None,
        }
    }

    pub const BOTH: [Spin; 2] = [Spin::Plus, Spin::Minus];
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Parse a string of `+`/`-` symbols.
pub fn parse_spins(s: &str) -> Option<Vec<Spin>> {
    s.chars().map(Spin::from_symbol).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowType {
    Gamma,
    Delta,
}

impl RowType {
    pub fn other(self) -> RowType {
        match self {
            RowType::Gamma => RowType::Delta,
            RowType::Delta => RowType::Gamma,
        }
    }

    pub fn letter(self) -> char {
        match self {
            RowType::Gamma => 'G',
            RowType::Delta => 'D',
        }
    }
}

impl fmt::Display for RowType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RowType::Gamma => "gamma",
            RowType::Delta => "delta",
        })
    }
}

impl FromStr for RowType {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gamma" | "g" | "γ" => Ok(RowType::Gamma),
            "delta" | "d" | "δ" => Ok(RowType::Delta),
            _ => Err(LatticeError::Parse {
                what: "row type",
                input: s.to_string(),
            }),
        }
    }
}

/// A weakly decreasing sequence of non-negative parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, LatticeError> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(LatticeError::NotWeaklyDecreasing(parts));
        }
        Ok(Partition(parts))
    }

    pub fn zero(len: usize) -> Self {
        Partition(vec![0; len])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Pad with zeros to exactly `len` parts.
    pub fn padded(&self, len: usize) -> Result<Self, LatticeError> {
        if self.0.len() > len {
            return Err(LatticeError::TooManyParts {
                parts: self.0.len(),
                rows: len,
            });
        }
        let mut p = self.0.clone();
        p.resize(len, 0);
        Ok(Partition(p))
    }

    /// All partitions with exactly `len` parts (zeros allowed) and largest
    /// part at most `max_part`, in reverse lexicographic order.
    pub fn all_bounded(len: usize, max_part: u32) -> Vec<Partition> {
        fn rec(len: usize, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if cur.len() == len {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (0..=cap).rev() {
                cur.push(p);
                rec(len, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(len, max_part, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = LatticeError;
    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl FromStr for Partition {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Partition::new(parse_list(s, "partition")?)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", join(&self.0))
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn parse_list<T: FromStr>(s: &str, what: &'static str) -> Result<Vec<T>, LatticeError> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|p| {
            p.trim().parse().map_err(|_| LatticeError::Parse {
                what,
                input: s.to_string(),
            })
        })
        .collect()
}

/// A strictly decreasing set of column labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct ColumnSet(Vec<usize>);

impl ColumnSet {
    /// Accepts labels in any order; duplicates are rejected.
    pub fn new(mut cols: Vec<usize>) -> Result<Self, LatticeError> {
        cols.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(w) = cols.windows(2).find(|w| w[0] == w[1]) {
            return Err(LatticeError::DuplicateColumn(w[0]));
        }
        Ok(ColumnSet(cols))
    }

    pub fn empty() -> Self {
        ColumnSet(Vec::new())
    }

    pub fn columns(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.0.contains(&c)
    }

    pub fn max(&self) -> Option<usize> {
        self.0.first().copied()
    }

    /// Bit `c` set for each member `c`.
    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, &c| m | (1u64 << c))
    }

    /// All subsets of `0..columns` of the given size, as column sets.
    pub fn all_of_size(columns: usize, size: usize) -> Vec<ColumnSet> {
        fn rec(start: usize, columns: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<ColumnSet>) {
            if cur.len() == size {
                out.push(ColumnSet::new(cur.clone()).expect("distinct by construction"));
                return;
            }
            for c in start..columns {
                cur.push(c);
                rec(c + 1, columns, size, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(0, columns, size, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<usize>> for ColumnSet {
    type Error = LatticeError;
    fn try_from(v: Vec<usize>) -> Result<Self, Self::Error> {
        ColumnSet::new(v)
    }
}

impl From<ColumnSet> for Vec<usize> {
    fn from(c: ColumnSet) -> Self {
        c.0
    }
}

impl FromStr for ColumnSet {
    type Err = LatticeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "{}" || t == "-" || t == "empty" {
            return Ok(ColumnSet::empty());
        }
        ColumnSet::new(parse_list(t.trim_start_matches('{').trim_end_matches('}'), "column set")?)
    }
}

impl fmt::Display for ColumnSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", join(&self.0))
    }
}

/// `{λ_i + k - i : i = 1..k}`. Missing parts count as zero.
pub fn columns_from_partition(lambda: &Partition, k: usize) -> Result<ColumnSet, LatticeError> {
    let p = lambda.padded(k)?;
    let cols = p
        .parts()
        .iter()
        .enumerate()
        .map(|(i, &l)| l as usize + k - 1 - i)
        .collect();
    ColumnSet::new(cols)
}

/// One row of a system: its ice type and the index of its spectral variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Row {
    pub kind: RowType,
    pub param: usize,
}

impl Row {
    pub fn new(kind: RowType, param: usize) -> Self {
        Row { kind, param }
    }
}

/// A rectangular system. Left boundary spins are all Plus, right boundary
/// spins all Minus; the top and bottom boundaries are Minus exactly on the
/// given column sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SystemSpec {
    columns: usize,
    rows: Vec<Row>,
    top_minus: ColumnSet,
    bottom_minus: ColumnSet,
    modulus: u32,
    nvars: usize,
}

impl SystemSpec {
    pub fn new(
        columns: usize,
        rows: Vec<Row>,
        top_minus: ColumnSet,
        bottom_minus: ColumnSet,
        modulus: u32,
    ) -> Result<Self, LatticeError> {
        let spec = Self::unchecked(columns, rows, top_minus, bottom_minus, modulus)?;
        if spec.top_minus.len() != spec.bottom_minus.len() + spec.rows.len() {
            return Err(LatticeError::Flux {
                top: spec.top_minus.len(),
                bottom: spec.bottom_minus.len(),
                rows: spec.rows.len(),
            });
        }
        Ok(spec)
    }

    /// Like [`SystemSpec::new`] but without the flux check. Such systems
    /// simply have no admissible states; useful for exhaustive tests.
    pub fn unchecked(
        columns: usize,
        rows: Vec<Row>,
        top_minus: ColumnSet,
        bottom_minus: ColumnSet,
        modulus: u32,
    ) -> Result<Self, LatticeError> {
        if columns == 0 || rows.is_empty() {
            return Err(LatticeError::EmptyGrid);
        }
        if columns > 63 {
            return Err(LatticeError::ColumnOutOfRange { column: columns - 1, columns: 63 });
        }
        if modulus == 0 {
            return Err(LatticeError::ZeroModulus);
        }
        for set in [&top_minus, &bottom_minus] {
            if let Some(c) = set.max().filter(|&c| c >= columns) {
                return Err(LatticeError::ColumnOutOfRange { column: c, columns });
            }
        }
        let nvars = rows.iter().map(|r| r.param + 1).max().unwrap_or(1);
        Ok(SystemSpec {
            columns,
            rows,
            top_minus,
            bottom_minus,
            modulus,
            nvars,
        })
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn top_minus(&self) -> &ColumnSet {
        &self.top_minus
    }

    pub fn bottom_minus(&self) -> &ColumnSet {
        &self.bottom_minus
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of spectral variables (largest parameter index + 1).
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Widen the variable count, e.g. to embed into a shared ring.
    pub fn with_nvars(mut self, nvars: usize) -> Self {
        self.nvars = self.nvars.max(nvars);
        self
    }

    /// Column label at left-to-right position `x`.
    pub fn label(&self, x: usize) -> usize {
        self.columns - 1 - x
    }

    pub fn top_boundary(&self) -> Vec<Spin> {
        self.boundary(&self.top_minus)
    }

    pub fn bottom_boundary(&self) -> Vec<Spin> {
        self.boundary(&self.bottom_minus)
    }

    fn boundary(&self, set: &ColumnSet) -> Vec<Spin> {
        (0..self.columns)
            .map(|x| if set.contains(self.label(x)) { Spin::Minus } else { Spin::Plus })
            .collect()
    }

    /// Copy with one row replaced.
    pub fn with_row(&self, i: usize, row: Row) -> Self {
        let mut s = self.clone();
        s.rows[i] = row;
        s.nvars = s.rows.iter().map(|r| r.param + 1).max().unwrap_or(1).max(self.nvars);
        s
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("{}(z{})", r.kind.letter(), r.param + 1))
            .collect();
        write!(
            f,
            "M={} n={} rows=[{}] top={} bottom={}",
            self.columns,
            self.modulus,
            rows.join(","),
            self.top_minus,
            self.bottom_minus
        )
    }
}

/// The standard system for `λ` with `r` rows: top boundary Minus on the
/// shifted parts, empty bottom, row `i` carrying `z_{i+1}`.
pub fn build_standard_system(
    lambda: &Partition,
    r: usize,
    row_types: &[RowType],
    n: u32,
) -> Result<SystemSpec, LatticeError> {
    if row_types.len() != r {
        return Err(LatticeError::RowTypeCount {
            expected: r,
            got: row_types.len(),
        });
    }
    let top = columns_from_partition(lambda, r)?;
    let columns = lambda.first() as usize + r;
    let rows = row_types.iter().enumerate().map(|(i, &k)| Row::new(k, i)).collect();
    SystemSpec::new(columns, rows, top, ColumnSet::empty(), n)
}

/// Same as [`build_standard_system`] with every row of one type and the
/// parameters optionally reversed (`z^σ`).
pub fn build_uniform_system(
    lambda: &Partition,
    r: usize,
    kind: RowType,
    reversed: bool,
    n: u32,
) -> Result<SystemSpec, LatticeError> {
    let spec = build_standard_system(lambda, r, &vec![kind; r], n)?;
    if !reversed {
        return Ok(spec);
    }
    let rows = (0..r).map(|i| Row::new(kind, r - 1 - i)).collect();
    SystemSpec::new(spec.columns, rows, spec.top_minus, spec.bottom_minus, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TwoRowOrder {
    /// Γ row with `z1` on top of a Δ row with `z2`.
    GammaDelta,
    /// Δ row with `z2` on top of a Γ row with `z1`.
    DeltaGamma,
}

/// Two-row system on `columns` columns.
pub fn build_two_row(
    top: &ColumnSet,
    bottom: &ColumnSet,
    order: TwoRowOrder,
    columns: usize,
    n: u32,
) -> Result<SystemSpec, LatticeError> {
    let rows = match order {
        TwoRowOrder::GammaDelta => vec![Row::new(RowType::Gamma, 0), Row::new(RowType::Delta, 1)],
        TwoRowOrder::DeltaGamma => vec![Row::new(RowType::Delta, 1), Row::new(RowType::Gamma, 0)],
    };
    SystemSpec::new(columns, rows, top.clone(), bottom.clone(), n)
}

/// Smallest column count that fits both boundaries.
pub fn min_columns(top: &ColumnSet, bottom: &ColumnSet) -> usize {
    top.max().max(bottom.max()).map_or(1, |c| c + 1)
}

/// Spins on every edge. `horizontal[i]` has `M + 1` entries for row `i`;
/// `vertical[j]` has `M` entries for the `j`-th line of vertical edges
/// (`j = 0` is the top boundary, `j = rows` the bottom boundary).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpinState {
    pub horizontal: Vec<Vec<Spin>>,
    pub vertical: Vec<Vec<Spin>>,
}

/// Spins of one vertex, read as (left, top, right, bottom).
pub type VertexSpins = (Spin, Spin, Spin, Spin);

impl SpinState {
    pub fn vertex(&self, row: usize, x: usize) -> VertexSpins {
        (
            self.horizontal[row][x],
            self.vertical[row][x],
            self.horizontal[row][x + 1],
            self.vertical[row + 1][x],
        )
    }

    /// Structural check against a spec: boundaries and the ice rule.
    pub fn is_admissible(&self, spec: &SystemSpec) -> bool {
        let (r, m) = (spec.num_rows(), spec.columns());
        if self.horizontal.len() != r || self.vertical.len() != r + 1 {
            return false;
        }
        if self.vertical[0] != spec.top_boundary() || self.vertical[r] != spec.bottom_boundary() {
            return false;
        }
        for i in 0..r {
            let h = &self.horizontal[i];
            if h.len() != m + 1 || h[0] != Spin::Plus || h[m] != Spin::Minus {
                return false;
            }
            for x in 0..m {
                if !ice_rule(self.vertex(i, x)) {
                    return false;
                }
            }
        }
        self.vertical.iter().all(|v| v.len() == m)
    }

    /// Number of Minus edges on vertical line `j`.
    pub fn minus_count(&self, j: usize) -> usize {
        self.vertical[j].iter().filter(|s| s.is_minus()).count()
    }
}

/// The six allowed patterns are exactly those with as many Minus spins on
/// (left, top) as on (right, bottom).
pub fn ice_rule((l, t, r, b): VertexSpins) -> bool {
    l.is_minus() as u8 + t.is_minus() as u8 == r.is_minus() as u8 + b.is_minus() as u8
}

/// A spin state with a charge on every horizontal edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChargedState {
    pub spins: SpinState,
    /// Same shape as `spins.horizontal`.
    pub charges: Vec<Vec<u32>>,
}

impl ChargedState {
    /// Charges on the (left, right) edges of a vertex.
    pub fn vertex_charges(&self, row: usize, x: usize) -> (u32, u32) {
        (self.charges[row][x], self.charges[row][x + 1])
    }
}

/// Charges of a single row of horizontal spins (left to right).
pub fn row_charges(kind: RowType, h: &[Spin], n: u32) -> Vec<u32> {
    let mut out = vec![0; h.len()];
    let mut count = 0u32;
    match kind {
        RowType::Gamma => {
            for k in (0..h.len()).rev() {
                if h[k] == Spin::Plus {
                    count = (count + 1) % n;
                }
                out[k] = count;
            }
        }
        RowType::Delta => {
            for k in 0..h.len() {
                if h[k] == Spin::Minus {
                    count = (count + 1) % n;
                }
                out[k] = count;
            }
        }
    }
    out
}

/// Γ rows count Plus edges weakly to the right, Δ rows count Minus edges
/// weakly to the left; both mod `n`.
pub fn derive_charges(spec: &SystemSpec, state: SpinState) -> ChargedState {
    let charges = spec
        .rows()
        .iter()
        .zip(&state.horizontal)
        .map(|(row, h)| row_charges(row.kind, h, spec.modulus()))
        .collect();
    ChargedState {
        spins: state,
        charges,
    }
}

/// Depth-first enumeration of admissible states in row-major order,
/// trying Plus before Minus on each vertical edge below a vertex.
pub struct AdmissibleStates<'a> {
    spec: &'a SystemSpec,
    horizontal: Vec<Vec<Spin>>,
    vertical: Vec<Vec<Spin>>,
    bottom: Vec<Spin>,
    next_option: Vec<u8>,
    depth: usize,
    done: bool,
}

pub fn enumerate_admissible(spec: &SystemSpec) -> AdmissibleStates<'_> {
    let (r, m) = (spec.num_rows(), spec.columns());
    let mut horizontal = vec![vec![Spin::Plus; m + 1]; r];
    for h in &mut horizontal {
        h[m] = Spin::Minus;
    }
    let mut vertical = vec![vec![Spin::Plus; m]; r + 1];
    vertical[0] = spec.top_boundary();
    vertical[r] = spec.bottom_boundary();
    let flux_ok = spec.top_minus().len() == spec.bottom_minus().len() + r;
    AdmissibleStates {
        spec,
        horizontal,
        bottom: vertical[r].clone(),
        vertical,
        next_option: vec![0; r * m],
        depth: 0,
        done: !flux_ok,
    }
}

impl AdmissibleStates<'_> {
    fn place(&mut self, k: usize, below: Spin) -> bool {
        let m = self.spec.columns();
        let r = self.spec.num_rows();
        let (i, x) = (k / m, k % m);
        let left = self.horizontal[i][x];
        let top = self.vertical[i][x];
        let minus_out = left.is_minus() as i32 + top.is_minus() as i32 - below.is_minus() as i32;
        let right = match minus_out {
            0 => Spin::Plus,
            1 => Spin::Minus,
            _ => return false,
        };
        if x == m - 1 && right != Spin::Minus {
            return false;
        }
        if i == r - 1 && below != self.bottom[x] {
            return false;
        }
        self.horizontal[i][x + 1] = right;
        self.vertical[i + 1][x] = below;
        if x == m - 1 && i + 1 < r {
            // Each remaining row removes exactly one Minus.
            let minus = self.vertical[i + 1].iter().filter(|s| s.is_minus()).count();
            if minus != self.spec.bottom_minus().len() + (r - i - 1) {
                return false;
            }
        }
        true
    }
}

impl Iterator for AdmissibleStates<'_> {
    type Item = ChargedState;

    fn next(&mut self) -> Option<ChargedState> {
        if self.done {
            return None;
        }
        let total = self.next_option.len();
        loop {
            if self.depth == total {
                let spins = SpinState {
                    horizontal: self.horizontal.clone(),
                    vertical: self.vertical.clone(),
                };
                self.depth -= 1;
                return Some(derive_charges(self.spec, spins));
            }
            let k = self.depth;
            let opt = self.next_option[k];
            if opt >= 2 {
                self.next_option[k] = 0;
                if k == 0 {
                    self.done = true;
                    return None;
                }
                self.depth -= 1;
                continue;
            }
            self.next_option[k] += 1;
            let below = if opt == 0 { Spin::Plus } else { Spin::Minus };
            if self.place(k, below) {
                self.depth += 1;
            }
        }
    }
}

/// All horizontal spin rows for a single row with the given top and bottom
/// vertical spins (left to right). Left boundary Plus, right boundary Minus.
pub fn single_row_fillings(top: &[Spin], bottom: &[Spin]) -> Option<Vec<Spin>> {
    let mut h = Vec::with_capacity(top.len() + 1);
    h.push(Spin::Plus);
    for x in 0..top.len() {
        let out = h[x].is_minus() as i32 + top[x].is_minus() as i32 - bottom[x].is_minus() as i32;
        h.push(match out {
            0 => Spin::Plus,
            1 => Spin::Minus,
            _ => return None,
        });
    }
    (h[top.len()] == Spin::Minus).then_some(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(v: &[usize]) -> ColumnSet {
        ColumnSet::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partition_columns() {
        let p = Partition::new(vec![3, 2, 0]).unwrap();
        assert_eq!(columns_from_partition(&p, 3).unwrap(), cs(&[5, 3, 0]));
        let p = Partition::new(vec![2, 1, 1]).unwrap();
        assert_eq!(columns_from_partition(&p, 3).unwrap(), cs(&[4, 2, 1]));
        assert_eq!(columns_from_partition(&Partition::zero(4), 4).unwrap(), cs(&[3, 2, 1, 0]));
        let mu = Partition::new(vec![4]).unwrap();
        assert_eq!(columns_from_partition(&mu, 1).unwrap(), cs(&[4]));
    }

    #[test]
    fn partition_validation() {
        assert!(matches!(
            "1,2".parse::<Partition>(),
            Err(LatticeError::NotWeaklyDecreasing(_))
        ));
        assert!("3,x".parse::<Partition>().is_err());
        assert_eq!("3,2,0".parse::<Partition>().unwrap().parts(), &[3, 2, 0]);
        assert!(Partition::new(vec![1, 1, 1]).unwrap().padded(2).is_err());
        assert_eq!(Partition::all_bounded(2, 2).len(), 6);
    }

    #[test]
    fn column_sets() {
        assert_eq!("{1,4,2}".parse::<ColumnSet>().unwrap(), cs(&[4, 2, 1]));
        assert_eq!("{}".parse::<ColumnSet>().unwrap(), ColumnSet::empty());
        assert!(matches!(ColumnSet::new(vec![2, 2]), Err(LatticeError::DuplicateColumn(2))));
        assert_eq!(ColumnSet::all_of_size(4, 2).len(), 6);
    }

    #[test]
    fn smallest_system_has_one_state() {
        let spec = build_standard_system(&Partition::zero(1), 1, &[RowType::Gamma], 1).unwrap();
        assert_eq!(spec.columns(), 1);
        assert_eq!(enumerate_admissible(&spec).count(), 1);
    }

    #[test]
    fn flux_violations() {
        let err = build_two_row(&cs(&[2, 1, 0]), &cs(&[2, 1]), TwoRowOrder::GammaDelta, 3, 2);
        assert!(matches!(err, Err(LatticeError::Flux { .. })));
        let spec = SystemSpec::unchecked(
            3,
            vec![Row::new(RowType::Gamma, 0)],
            ColumnSet::empty(),
            ColumnSet::empty(),
            2,
        )
        .unwrap();
        assert_eq!(enumerate_admissible(&spec).count(), 0);
    }

    #[test]
    fn standard_builder_checks_row_types() {
        let p = Partition::new(vec![1, 0]).unwrap();
        assert!(matches!(
            build_standard_system(&p, 2, &[RowType::Gamma], 2),
            Err(LatticeError::RowTypeCount { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn charges_follow_counting_rules() {
        let h = parse_spins("+++++").unwrap();
        assert_eq!(row_charges(RowType::Gamma, &h, 3)[0], 5 % 3);
        let h = parse_spins("-----").unwrap();
        assert!(row_charges(RowType::Gamma, &h, 3).iter().all(|&c| c == 0));
        let h = parse_spins("+--+-").unwrap();
        assert_eq!(row_charges(RowType::Delta, &h, 5), vec![0, 1, 2, 2, 3]);
    }

    #[test]
    fn states_are_admissible_and_distinct() {
        let p = Partition::new(vec![2, 1, 0]).unwrap();
        let spec = build_standard_system(&p, 3, &[RowType::Gamma; 3], 2).unwrap();
        let states: Vec<_> = enumerate_admissible(&spec).collect();
        assert!(!states.is_empty());
        let mut seen = std::collections::HashSet::new();
        for s in &states {
            assert!(s.spins.is_admissible(&spec));
            assert!(seen.insert(s.spins.clone()));
        }
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // Brute force over all interior spins for a small two-row grid.
        let spec = build_two_row(&cs(&[3, 1]), &ColumnSet::empty(), TwoRowOrder::GammaDelta, 4, 1).unwrap();
        let m = spec.columns();
        let mut count = 0;
        for mid in 0u32..(1 << m) {
            let vm: Vec<Spin> = (0..m).map(|x| if mid >> x & 1 == 1 { Spin::Minus } else { Spin::Plus }).collect();
            let top = spec.top_boundary();
            let bot = spec.bottom_boundary();
            if single_row_fillings(&top, &vm).is_some() && single_row_fillings(&vm, &bot).is_some() {
                count += 1;
            }
        }
        assert_eq!(enumerate_admissible(&spec).count(), count);
    }
}
