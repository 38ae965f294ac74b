//! Partition functions by direct enumeration and by row transfer matrices.

use std::collections::HashMap;

use serde::Serialize;

use crate::boltzmann::{vertex_weight, VertexPattern};
use crate::coeff::{CoeffElem, Ring};
use crate::lattice::{enumerate_admissible, row_charges, ChargedState, Row, RowType, Spin, SystemSpec};

/// The coefficient ring a system's weights live in.
pub fn system_ring(spec: &SystemSpec) -> Ring {
    Ring::new(spec.modulus(), spec.nvars())
}

/// Vertex weights of one row, indexed by spins and charges.
#[derive(Clone, Debug)]
pub struct RowWeights {
    n: u32,
    table: Vec<CoeffElem>,
}

impl RowWeights {
    pub fn new(kind: RowType, ring: Ring, var: usize) -> Self {
        let n = ring.modulus();
        let mut table = Vec::with_capacity(16 * (n * n) as usize);
        for bits in 0..16u32 {
            for cl in 0..n {
                for cr in 0..n {
                    let p = VertexPattern::new(spins_of(bits), (cl, cr));
                    table.push(vertex_weight(kind, &p, ring, var));
                }
            }
        }
        RowWeights { n, table }
    }

    pub fn get(&self, spins: (Spin, Spin, Spin, Spin), charges: (u32, u32)) -> &CoeffElem {
        let bits = bits_of(spins);
        let n = self.n;
        &self.table[((bits * n + charges.0 % n) * n + charges.1 % n) as usize]
    }
}

fn bits_of((l, t, r, b): (Spin, Spin, Spin, Spin)) -> u32 {
    (l.is_minus() as u32) << 3 | (t.is_minus() as u32) << 2 | (r.is_minus() as u32) << 1 | b.is_minus() as u32
}

fn spins_of(bits: u32) -> (Spin, Spin, Spin, Spin) {
    let s = |k: u32| if bits >> k & 1 == 1 { Spin::Minus } else { Spin::Plus };
    (s(3), s(2), s(1), s(0))
}

/// Per-row weight tables for a whole system.
pub struct WeightCache {
    ring: Ring,
    rows: Vec<RowWeights>,
}

impl WeightCache {
    pub fn new(spec: &SystemSpec) -> Self {
        let ring = system_ring(spec);
        let mut built: HashMap<Row, RowWeights> = HashMap::new();
        let rows = spec
            .rows()
            .iter()
            .map(|r| {
                built
                    .entry(*r)
                    .or_insert_with(|| RowWeights::new(r.kind, ring, r.param))
                    .clone()
            })
            .collect();
        WeightCache { ring, rows }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn state_weight(&self, s: &ChargedState) -> CoeffElem {
        let mut acc = CoeffElem::one(self.ring);
        for (i, w) in self.rows.iter().enumerate() {
            for x in 0..s.spins.vertical[0].len() {
                let f = w.get(s.spins.vertex(i, x), s.vertex_charges(i, x));
                if f.is_zero() {
                    return CoeffElem::zero(self.ring);
                }
                acc = &acc * f;
            }
        }
        acc
    }
}

/// Product of all vertex weights of a state.
pub fn state_weight(spec: &SystemSpec, s: &ChargedState) -> CoeffElem {
    WeightCache::new(spec).state_weight(s)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionValue {
    pub value: CoeffElem,
    /// Admissible states visited (including those of weight zero).
    pub state_count: usize,
    /// States with nonzero weight.
    pub nonzero_states: usize,
}

/// Sum of state weights over all admissible states.
pub fn partition_function(spec: &SystemSpec) -> PartitionValue {
    let cache = WeightCache::new(spec);
    let mut value = CoeffElem::zero(cache.ring());
    let (mut state_count, mut nonzero_states) = (0, 0);
    for s in enumerate_admissible(spec) {
        state_count += 1;
        let w = cache.state_weight(&s);
        if !w.is_zero() {
            nonzero_states += 1;
            value += w;
        }
    }
    PartitionValue {
        value,
        state_count,
        nonzero_states,
    }
}

/// One row's summed weights between top and bottom vertical spin vectors.
/// Keys are bitmasks over column labels (bit `c` set when column `c` is
/// Minus). Only nonzero entries are stored.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    pub columns: usize,
    pub row: Row,
    pub ring: Ring,
    pub entries: HashMap<(u64, u64), CoeffElem>,
}

impl TransferMatrix {
    pub fn entry(&self, top: u64, bottom: u64) -> CoeffElem {
        self.entries
            .get(&(top, bottom))
            .cloned()
            .unwrap_or_else(|| CoeffElem::zero(self.ring))
    }
}

fn mask_to_spins(mask: u64, columns: usize) -> Vec<Spin> {
    (0..columns)
        .map(|x| if mask >> (columns - 1 - x) & 1 == 1 { Spin::Minus } else { Spin::Plus })
        .collect()
}

/// Transfer matrix of a row with `columns` columns in the given ring.
pub fn row_transfer_matrix_in(kind: RowType, param: usize, columns: usize, ring: Ring) -> TransferMatrix {
    assert!((1..=20).contains(&columns), "transfer matrices support 1..=20 columns");
    let weights = RowWeights::new(kind, ring, param);
    let n = ring.modulus();
    let mut entries = HashMap::new();
    for top in 0u64..(1 << columns) {
        let ts = mask_to_spins(top, columns);
        // Walk left to right; the bottom spin at each column fixes the next
        // horizontal spin.
        let mut stack: Vec<(usize, Vec<Spin>, u64)> = vec![(0, vec![Spin::Plus], 0)];
        while let Some((x, h, bottom)) = stack.pop() {
            if x == columns {
                if h[columns] != Spin::Minus {
                    continue;
                }
                let ch = row_charges(kind, &h, n);
                let bs = mask_to_spins(bottom, columns);
                let mut w = CoeffElem::one(ring);
                for k in 0..columns {
                    let f = weights.get((h[k], ts[k], h[k + 1], bs[k]), (ch[k], ch[k + 1]));
                    if f.is_zero() {
                        w = CoeffElem::zero(ring);
                        break;
                    }
                    w = &w * f;
                }
                if !w.is_zero() {
                    *entries.entry((top, bottom)).or_insert_with(|| CoeffElem::zero(ring)) += w;
                }
                continue;
            }
            for b in Spin::BOTH {
                let out = h[x].is_minus() as i32 + ts[x].is_minus() as i32 - b.is_minus() as i32;
                let right = match out {
                    0 => Spin::Plus,
                    1 => Spin::Minus,
                    _ => continue,
                };
                let mut h2 = h.clone();
                h2.push(right);
                let bit = if b.is_minus() { 1u64 << (columns - 1 - x) } else { 0 };
                stack.push((x + 1, h2, bottom | bit));
            }
        }
    }
    entries.retain(|_, v| !v.is_zero());
    TransferMatrix {
        columns,
        row: Row::new(kind, param),
        ring,
        entries,
    }
}

/// Transfer matrix with spectral variable `z_{param+1}` in the ring with
/// `param + 1` variables.
pub fn row_transfer_matrix(kind: RowType, param: usize, columns: usize, n: u32) -> TransferMatrix {
    row_transfer_matrix_in(kind, param, columns, Ring::new(n, param + 1))
}

/// Partition function as a product of row transfer matrices applied to the
/// top boundary vector.
pub fn partition_via_transfer(spec: &SystemSpec) -> PartitionValue {
    let ring = system_ring(spec);
    let m = spec.columns();
    let mut built: HashMap<Row, TransferMatrix> = HashMap::new();
    let mut vec: HashMap<u64, CoeffElem> = HashMap::new();
    vec.insert(spec.top_minus().mask(), CoeffElem::one(ring));
    for row in spec.rows() {
        let t = built
            .entry(*row)
            .or_insert_with(|| row_transfer_matrix_in(row.kind, row.param, m, ring));
        let mut next: HashMap<u64, CoeffElem> = HashMap::new();
        for ((top, bottom), w) in &t.entries {
            if let Some(x) = vec.get(top) {
                *next.entry(*bottom).or_insert_with(|| CoeffElem::zero(ring)) += x * w;
            }
        }
        next.retain(|_, v| !v.is_zero());
        vec = next;
    }
    let value = vec
        .remove(&spec.bottom_minus().mask())
        .unwrap_or_else(|| CoeffElem::zero(ring));
    PartitionValue {
        value,
        state_count: 0,
        nonzero_states: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_standard_system, build_two_row, ColumnSet, Partition, TwoRowOrder};

    #[test]
    fn single_vertex_system() {
        // λ = (0), one Γ row: the single vertex has left +, top -, right -,
        // bottom +, charges (1, 0): label c2, weight 1.
        let spec = build_standard_system(&Partition::zero(1), 1, &[RowType::Gamma], 1).unwrap();
        let z = partition_function(&spec);
        assert_eq!(z.state_count, 1);
        assert_eq!(z.value, CoeffElem::one(system_ring(&spec)));
    }

    #[test]
    fn empty_system_is_zero() {
        let spec = SystemSpec::unchecked(
            2,
            vec![Row::new(RowType::Delta, 0)],
            ColumnSet::empty(),
            ColumnSet::empty(),
            2,
        )
        .unwrap();
        assert!(partition_function(&spec).value.is_zero());
        assert!(partition_via_transfer(&spec).value.is_zero());
    }

    #[test]
    fn one_vertex_transfer_matrix() {
        let t = row_transfer_matrix(RowType::Gamma, 0, 1, 1);
        let ring = Ring::new(1, 1);
        // top -, bottom +: c2 = 1. top +, bottom +: flux violation.
        assert_eq!(t.entry(1, 0), CoeffElem::one(ring));
        assert!(t.entry(0, 0).is_zero());
        assert!(t.entry(1, 1).is_zero());
    }

    #[test]
    fn flux_rule_in_transfer_matrices() {
        for kind in [RowType::Gamma, RowType::Delta] {
            let t = row_transfer_matrix(kind, 0, 4, 3);
            for (top, bottom) in t.entries.keys() {
                assert_eq!(top.count_ones(), bottom.count_ones() + 1);
            }
        }
    }

    #[test]
    fn bottom_gamma_row_is_pure_power() {
        let n = 2;
        let t = row_transfer_matrix(RowType::Gamma, 0, 4, n);
        let ring = Ring::new(n, 1);
        for ((top, bottom), w) in &t.entries {
            if *bottom == 0 {
                let minus_col = top.trailing_zeros() as i32;
                assert_eq!(top.count_ones(), 1);
                // One b2 vertex for each column right of the Minus one.
                assert_eq!(*w, CoeffElem::z_pow(ring, 0, minus_col));
            }
        }
    }

    #[test]
    fn transfer_agrees_with_enumeration() {
        let top = ColumnSet::new(vec![4, 2, 1]).unwrap();
        let bottom = ColumnSet::new(vec![4]).unwrap();
        for order in [TwoRowOrder::GammaDelta, TwoRowOrder::DeltaGamma] {
            let spec = build_two_row(&top, &bottom, order, 6, 2).unwrap();
            assert_eq!(partition_function(&spec).value, partition_via_transfer(&spec).value);
        }
    }
}
