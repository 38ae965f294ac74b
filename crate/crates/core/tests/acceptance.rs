//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Every check is an exact equality.

use std::process::{Command, ExitCode};
use std::time::Instant;

use metaplectic_ice::coeff::{normalize_g, sample_point, CoeffElem, Rational, Ring};
use metaplectic_ice::engine::{partition_function, partition_via_transfer};
use metaplectic_ice::lattice::{ColumnSet, Partition, Row, RowType, SystemSpec};
use metaplectic_ice::verify::{self, two_row_boundaries, VerificationReport};
use metaplectic_ice::ybsystem::verify_yb_system;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

mod common;

const KINDS: [RowType; 2] = [RowType::Gamma, RowType::Delta];

type Criterion = (u32, &'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn from_reports(reports: &[VerificationReport], extra: &str) -> Self {
        let cases: usize = reports.iter().map(|r| r.cases_checked).sum();
        let failed: Vec<_> = reports.iter().flat_map(|r| r.failures.iter()).collect();
        let detail = match failed.first() {
            None => format!("{cases} cases{extra}"),
            Some(c) => format!("{} of {cases} cases failed; first: {}{extra}", failed.len(), c.case),
        };
        Outcome {
            passed: failed.is_empty(),
            detail,
        }
    }
}

fn criterion(num: u32, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    println!(
        "criterion {num} {} {title}: {} [{:.1}s]",
        if out.passed { "PASS" } else { "FAIL" },
        out.detail,
        start.elapsed().as_secs_f64()
    );
    out.passed
}

fn ybe() -> Outcome {
    let reports: Vec<_> = (1..=4)
        .flat_map(|n| KINDS.into_iter().flat_map(move |x| KINDS.into_iter().map(move |y| (x, y, n))))
        .map(|(x, y, n)| verify::verify_ybe(x, y, n))
        .collect();
    let expected: usize = (1..=4usize).map(|n| 4 * 64 * n.pow(4)).sum();
    let mut out = Outcome::from_reports(&reports, "");
    let cases: usize = reports.iter().map(|r| r.cases_checked).sum();
    if cases != expected {
        out.passed = false;
        out.detail = format!("{cases} boundaries checked, expected {expected}");
    }
    out
}

fn two_row() -> Outcome {
    let mut reports: Vec<_> = (1..=3).map(|n| verify::verify_two_row_grid(6, 3, n)).collect();
    let top: ColumnSet = "{4,2,1}".parse().unwrap();
    let bottom: ColumnSet = "{4}".parse().unwrap();
    reports.push(verify::verify_two_row(&top, &bottom, 6, 2).unwrap());
    Outcome::from_reports(&reports, ", plus the M=6 top={4,2,1} bottom={4} n=2 instance")
}

fn duality_grid() -> Vec<(Partition, usize, u32)> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for r in 1..=3 {
            for l in Partition::all_bounded(r, 3) {
                out.push((l, r, n));
            }
        }
    }
    out
}

fn duality() -> Outcome {
    let mut reports: Vec<_> = duality_grid()
        .par_iter()
        .map(|(l, r, n)| verify::verify_duality(l, *r, *n).unwrap())
        .collect();
    reports.push(verify::verify_duality(&"3,2,0".parse().unwrap(), 3, 2).unwrap());
    Outcome::from_reports(&reports, ", including lambda=(3,2,0) r=3 n=2")
}

fn proof_steps() -> Outcome {
    let grid = duality_grid();
    let swaps: Vec<_> = grid
        .par_iter()
        .map(|(l, r, n)| verify::verify_bottom_row_swap(l, *r, *n).unwrap())
        .collect();
    let minus: Vec<_> = grid
        .par_iter()
        .map(|(l, r, n)| verify::verify_one_minus_above_bottom(l, *r, *n).unwrap())
        .collect();
    let mut boundaries = two_row_boundaries(5, 3);
    boundaries.push((6, "{4,2,1}".parse().unwrap(), "{4}".parse().unwrap()));
    let trains: Vec<_> = (1..=3)
        .flat_map(|n| boundaries.iter().map(move |b| (b, n)))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|((m, t, b), n)| verify::train_trace(t, b, *m, *n).unwrap().report)
        .collect();
    let witness = verify::find_non_bottom_swap_witness(3, 3, 3);

    let parts = [
        ("bottom-row swap", Outcome::from_reports(&swaps, "")),
        ("one Minus above bottom", Outcome::from_reports(&minus, "")),
        ("train trace", Outcome::from_reports(&trains, "")),
    ];
    let mut passed = parts.iter().all(|(_, o)| o.passed);
    let mut detail: Vec<String> = parts.iter().map(|(name, o)| format!("{name}: {}", o.detail)).collect();
    match witness {
        Some(w) => detail.push(format!(
            "non-bottom swap witness: lambda={} r={} n={} row {}",
            w.lambda, w.r, w.n, w.row
        )),
        None => {
            passed = false;
            detail.push("no non-bottom swap witness found".into());
        }
    }
    Outcome {
        passed,
        detail: detail.join("; "),
    }
}

fn yb_system() -> Outcome {
    let mut passed = true;
    let mut detail = Vec::new();
    for n in 1..=3 {
        match verify_yb_system(n, 20, 2024) {
            Ok(rep) => {
                let failed: Vec<_> = rep.relations.iter().filter(|r| !r.passed).map(|r| r.relation.as_str()).collect();
                let sampled_ok = rep.relations.iter().filter(|r| r.mode == "sampled").all(|r| r.points >= 20);
                passed &= rep.passed() && sampled_ok;
                let scalar = rep.proportionality.as_deref().unwrap_or("not scalar");
                if failed.is_empty() {
                    detail.push(format!("n={n}: 8 relations hold, scalar {scalar}"));
                } else {
                    detail.push(format!("n={n}: failed {failed:?}"));
                }
            }
            Err(e) => {
                passed = false;
                detail.push(format!("n={n}: {e}"));
            }
        }
    }
    Outcome {
        passed,
        detail: detail.join("; "),
    }
}

fn tokuyama() -> Outcome {
    let mut passed = true;
    let mut detail = Vec::new();
    for r in [2, 3] {
        match verify::tokuyama_grid(r, 3) {
            Ok(g) => {
                passed &= g.passed();
                let tableaux = g.results.iter().all(|t| t.schur_matches_tableaux);
                detail.push(format!(
                    "r={r}: {} partitions, monomial {}, Schur vs tableaux {}",
                    g.results.len(),
                    g.common_monomial.as_deref().unwrap_or("not constant"),
                    if tableaux { "agree" } else { "DISAGREE" }
                ));
            }
            Err(e) => {
                passed = false;
                detail.push(format!("r={r}: {e}"));
            }
        }
    }
    Outcome {
        passed,
        detail: detail.join("; "),
    }
}

/// All specs with at most 5 columns, 1 to 3 rows of any types, and any
/// flux-valid boundary.
fn desk_grid() -> Vec<SystemSpec> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for m in 1..=5 {
            for r in 1..=3 {
                for types in 0..(1u32 << r) {
                    let rows: Vec<Row> = (0..r)
                        .map(|i| Row::new(if types >> i & 1 == 1 { RowType::Delta } else { RowType::Gamma }, i))
                        .collect();
                    for k in r..=m {
                        for top in ColumnSet::all_of_size(m, k) {
                            for bottom in ColumnSet::all_of_size(m, k - r) {
                                out.push(SystemSpec::new(m, rows.clone(), top.clone(), bottom, n).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn confluence(samples: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..samples {
        let n = rng.gen_range(2..=6u32);
        let raw: Vec<(u32, u32)> = (0..rng.gen_range(0..7)).map(|_| (rng.gen_range(1..n), rng.gen_range(1..4))).collect();
        let reference = normalize_g(&raw, n).map_err(|e| e.to_string())?;
        if !reference.1.is_normal(n) {
            return Err(format!("sample {i}: result not normal"));
        }
        let mut shuffled = raw.clone();
        for k in (1..shuffled.len()).rev() {
            shuffled.swap(k, rng.gen_range(0..=k));
        }
        let ring = Ring::new(n, 1);
        let stepwise = shuffled
            .iter()
            .flat_map(|&(a, e)| std::iter::repeat_n(a, e as usize))
            .fold(CoeffElem::one(ring), |acc, a| acc * CoeffElem::g(ring, a as i64));
        let direct = CoeffElem::monomial(ring, Rational::one(), &[0], 0, &raw).map_err(|e| e.to_string())?;
        if normalize_g(&shuffled, n).map_err(|e| e.to_string())? != reference || stepwise != direct {
            return Err(format!("sample {i}: n={n} raw={raw:?} has two normal forms"));
        }
    }
    Ok(())
}

fn random_elem(rng: &mut ChaCha8Rng, ring: Ring) -> CoeffElem {
    let n = ring.modulus();
    (0..rng.gen_range(0..6)).fold(CoeffElem::zero(ring), |acc, _| {
        let z: Vec<i32> = (0..ring.nvars()).map(|_| rng.gen_range(-2..=3)).collect();
        let g: Vec<(u32, u32)> = if n > 1 {
            (0..rng.gen_range(0..4)).map(|_| (rng.gen_range(1..n), rng.gen_range(1..3))).collect()
        } else {
            Vec::new()
        };
        let c = Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=4).into());
        acc + CoeffElem::monomial(ring, c, &z, rng.gen_range(-2..=2), &g).unwrap()
    })
}

fn homomorphism(pairs: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..pairs {
        let ring = Ring::new(rng.gen_range(1..=4), rng.gen_range(1..=3));
        let (x, y) = (random_elem(&mut rng, ring), random_elem(&mut rng, ring));
        let p = sample_point(ring.modulus(), ring.nvars(), i as u64);
        let (ex, ey) = (x.evaluate(&p), y.evaluate(&p));
        if (&x + &y).evaluate(&p) != &ex + &ey || (&x * &y).evaluate(&p) != &ex * &ey {
            return Err(format!("pair {i}: evaluation is not multiplicative/additive"));
        }
    }
    Ok(())
}

fn cli_golden() -> Result<usize, String> {
    for (name, args) in common::GOLDEN_CASES {
        let run = || Command::new(env!("CARGO_BIN_EXE_mice")).args(*args).env_remove("MICE_THREADS").output();
        let (a, b) = (run().map_err(|e| e.to_string())?, run().map_err(|e| e.to_string())?);
        let golden = std::fs::read(common::golden_path(name)).map_err(|e| format!("{name}: {e}"))?;
        if a.stdout != b.stdout {
            return Err(format!("{name}: two runs differ"));
        }
        if a.stdout != golden {
            return Err(format!("{name}: differs from golden file"));
        }
    }
    Ok(common::GOLDEN_CASES.len())
}

fn infrastructure() -> Outcome {
    let specs = desk_grid();
    let mismatches: Vec<String> = specs
        .par_iter()
        .filter_map(|s| {
            let (e, t) = (partition_function(s).value, partition_via_transfer(s).value);
            (e != t).then(|| s.to_string())
        })
        .collect();
    let nonzero = specs.par_iter().filter(|s| !partition_via_transfer(s).value.is_zero()).count();
    let mut passed = mismatches.is_empty();
    let mut detail = vec![match mismatches.first() {
        None => format!("enumeration = transfer on {} specs ({nonzero} nonzero)", specs.len()),
        Some(s) => format!("{} of {} specs disagree; first {s}", mismatches.len(), specs.len()),
    }];
    for (name, res) in [
        ("g normal form confluent on 1000 monomials", confluence(1000).map(|_| 0)),
        ("evaluation homomorphism on 100 pairs", homomorphism(100).map(|_| 0)),
        ("CLI golden files byte-identical", cli_golden()),
    ] {
        match res {
            Ok(_) => detail.push(name.to_string()),
            Err(e) => {
                passed = false;
                detail.push(format!("{name}: FAILED {e}"));
            }
        }
    }
    Outcome {
        passed,
        detail: detail.join("; "),
    }
}

fn main() -> ExitCode {
    let only: Option<u32> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let all: [Criterion; 7] = [
        (1, "Yang-Baxter equation, all (X,Y), n<=4", ybe),
        (2, "two-row commutation, M<=6, |top|<=3, n<=3", two_row),
        (3, "Gamma/Delta duality, lambda_1<=3, r<=3, n<=3", duality),
        (4, "proof steps", proof_steps),
        (5, "Yang-Baxter system, n<=3", yb_system),
        (6, "n=1 deformed Schur cross-check, r in {2,3}, lambda_1<=3", tokuyama),
        (7, "infrastructure", infrastructure),
    ];
    let mut ok = true;
    for (num, title, f) in all {
        if only.is_none_or(|k| k == num) {
            ok &= criterion(num, title, f);
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
