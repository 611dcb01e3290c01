//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::Command;
use std::time::Instant;

use clap::Parser;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use runge_kit::analytic::{
    check_cor_j, check_prop_j, check_siegel_d, check_siegel_global, prop_j_ratio, CheckOptions, UpperHalfPoint,
    DEFAULT_TERMS,
};
use runge_kit::bounds::{
    bound_refined, bound_split_cartan, bound_theorem_1_2, is_prime, refined_matches_theorem_1_2, x0_plus_chain,
    SplitCartanBound,
};
use runge_kit::cli::{render, run, RunConfig};
use runge_kit::cusps::CuspLayout;
use runge_kit::exactmath::{bernoulli2, positive_combination, IntMatrix};
use runge_kit::gl2::{borel, closure, split_cartan, ResidueMatrix, Subgroup, UnitGroup};
use runge_kit::units::ModularCurve;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn cli(args: &[&str]) -> (i32, Value) {
    let argv = std::iter::once("runge-kit").chain(args.iter().copied());
    let config = RunConfig::try_parse_from(argv).expect("valid arguments");
    run(&config)
}

fn as_int(v: &Value) -> BigInt {
    match v {
        Value::Number(n) => BigInt::from(n.as_i64().expect("integer")),
        Value::String(s) => s.parse().expect("decimal integer"),
        _ => panic!("not an integer: {v}"),
    }
}

// Independent rank over Q by plain Gaussian elimination.
fn rank_q(rows: &[Vec<BigInt>]) -> usize {
    let mut m: Vec<Vec<BigRational>> =
        rows.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[rank][c];
                for j in c..cols {
                    let v = &f * &m[rank][j];
                    m[i][j] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn criterion_1() -> Outcome {
    let mut failures = Vec::new();
    for p in [3i64, 5, 7, 11, 13] {
        let ps = p.to_string();
        let (code, doc) = cli(&["divisors", "--split-cartan", &ps]);
        if code != 0 {
            failures.push(format!("p={p}: exit {code}"));
            continue;
        }
        let cusps = doc["cusps"].as_array().unwrap();
        let vec_of = |i: usize| (cusps[i]["vector"][0].as_i64().unwrap(), cusps[i]["vector"][1].as_i64().unwrap());
        let k = -(p * (p - 1) * (p - 1)) / 2;
        // (w_(1/p,0)) = k·(c_∞ − p·c_0 + Σc_j); the mirror swaps c_∞ and c_0.
        let expected = |label: (i64, i64), v: (i64, i64)| -> i64 {
            let (inf, zero) = if label == (1, 0) { ((0, 1), (1, 0)) } else { ((1, 0), (0, 1)) };
            if v == inf {
                k
            } else if v == zero {
                -p * k
            } else {
                k
            }
        };
        for label in [(1i64, 0i64), (0, 1)] {
            let entry = doc["divisors"]
                .as_array()
                .unwrap()
                .iter()
                .find(|d| (d["a"][0].as_i64().unwrap(), d["a"][1].as_i64().unwrap()) == label);
            let Some(entry) = entry else {
                failures.push(format!("p={p}: label {label:?} missing"));
                continue;
            };
            for t in entry["divisor"].as_array().unwrap() {
                let i = t["cusp"].as_u64().unwrap() as usize;
                let got = as_int(&t["ord"]);
                let want = BigInt::from(expected(label, vec_of(i)));
                if got != want {
                    failures.push(format!("p={p} a={label:?} cusp {:?}: {got} != {want}", vec_of(i)));
                }
            }
        }
    }
    let detail = if failures.is_empty() { "p in {3,5,7,11,13}, both units exact".into() } else { failures.join("; ") };
    outcome(failures.is_empty(), detail)
}

fn criterion_2() -> Outcome {
    let mut bad = Vec::new();
    for p in [3u32, 5, 7, 11, 13] {
        let g = split_cartan(p).unwrap();
        let layout = CuspLayout::new(&g, &UnitGroup::full(p).unwrap()).unwrap();
        let mut sizes: Vec<usize> = layout.galois_orbits().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        let want = vec![1, 1, p as usize - 1];
        if layout.num_geometric() != p as usize + 1 || sizes != want {
            bad.push(format!("p={p}: {} cusps, orbits {sizes:?}", layout.num_geometric()));
        }
    }
    let detail = if bad.is_empty() { "p+1 cusps, orbit sizes {1,1,p-1}".into() } else { bad.join("; ") };
    outcome(bad.is_empty(), detail)
}

fn gens(level: u32, list: &[[i64; 4]]) -> Subgroup {
    let g: Vec<ResidueMatrix> = list.iter().map(|e| ResidueMatrix::new(level, *e).unwrap()).collect();
    closure(&g, level).unwrap()
}

fn criterion_3() -> Outcome {
    let full = |n| UnitGroup::full(n).unwrap();
    let det = |g: &Subgroup| g.det_image().clone();
    let pm = |n| gens(n, &[]);
    let x1 = |n: u32, u: i64| gens(n, &[[1, 1, 0, 1], [1, 0, 0, u]]);
    let cases: Vec<(String, Subgroup, UnitGroup)> = vec![
        ("{±I} N=2".into(), pm(2), det(&pm(2))),
        ("{±I} N=5".into(), pm(5), det(&pm(5))),
        ("{±I} N=7".into(), pm(7), det(&pm(7))),
        ("{±I} N=12".into(), pm(12), det(&pm(12))),
        ("Borel N=5".into(), borel(5).unwrap(), full(5)),
        ("Borel N=8".into(), borel(8).unwrap(), full(8)),
        ("Borel N=13".into(), borel(13).unwrap(), full(13)),
        ("split Cartan p=3".into(), split_cartan(3).unwrap(), full(3)),
        ("split Cartan p=7".into(), split_cartan(7).unwrap(), full(7)),
        ("split Cartan p=13".into(), split_cartan(13).unwrap(), full(13)),
        ("X1-type N=8, H=<3>".into(), x1(8, 3), UnitGroup::generated(8, &[3]).unwrap()),
        ("X1-type N=10".into(), x1(10, 3), full(10)),
        ("diag(1,*) N=6".into(), gens(6, &[[1, 0, 0, 5]]), full(6)),
        ("Borel N=9, H=<4>".into(), borel(9).unwrap(), UnitGroup::generated(9, &[4]).unwrap()),
    ];
    let mut bad = Vec::new();
    for (name, g, h) in &cases {
        let curve = ModularCurve::new(g.clone(), h.clone()).unwrap();
        let m = curve.divisor_matrix().unwrap();
        let orbits = curve.layout().galois_orbits();
        let r = rank_q(&m.to_nested());
        if r + 1 != orbits.len() {
            bad.push(format!("{name}: rank {r} with {} orbits", orbits.len()));
        }
        for j in 0..m.cols() {
            let s: BigInt = (0..m.rows()).map(|i| m.get(i, j) * BigInt::from(orbits[i].len())).sum();
            if !s.is_zero() {
                bad.push(format!("{name}: weighted sum {s} for column {j}"));
            }
        }
    }
    let detail = if bad.is_empty() { format!("{} (N, G, H_K) cases", cases.len()) } else { bad.join("; ") };
    outcome(bad.is_empty(), detail)
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut done, mut failures, mut rejected) = (0, Vec::new(), 0);
    while done < 500 {
        let s = rng.random_range(1..=3usize);
        let t = rng.random_range(s..=6usize);
        let rows: Vec<Vec<i64>> = (0..s).map(|_| (0..t).map(|_| rng.random_range(-5..=5i64)).collect()).collect();
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        if rank_q(&big) < s {
            rejected += 1;
            continue;
        }
        done += 1;
        let b = match positive_combination(&IntMatrix::from_rows(&rows)) {
            Ok(b) => b,
            Err(e) => {
                failures.push(format!("{rows:?}: {e}"));
                continue;
            }
        };
        let b = b.entries();
        let a = BigInt::from(rows.iter().flatten().map(|x| x.abs()).max().unwrap());
        let mb: Vec<BigInt> = big.iter().map(|r| r.iter().zip(b).map(|(x, y)| x * y).sum()).collect();
        let norm: BigInt = b.iter().map(|x| x.abs()).sum();
        // ‖b‖₁ ≤ s^{s/2+1} A^{s−1}  ⟺  ‖b‖₁² ≤ s^{s+2} A^{2s−2}
        let cap = num_traits::pow(BigInt::from(s), s + 2) * num_traits::pow(a, 2 * s - 2);
        if !mb.iter().all(|x| x.is_positive()) || &norm * &norm > cap {
            failures.push(format!("{rows:?}: M·b = {mb:?}, ‖b‖₁ = {norm}"));
        }
    }
    let detail = if failures.is_empty() {
        format!("500 matrices, 0 failures ({rejected} rank-deficient draws skipped)")
    } else {
        format!("{} failures, first: {}", failures.len(), failures[0])
    };
    outcome(failures.is_empty(), detail)
}

fn criterion_5() -> Outcome {
    let mut first_bad = None;
    let mut one_over_6n = true;
    for n in 1..=1000i64 {
        let sum: BigRational = (1..=n)
            .map(|k| bernoulli2(&BigRational::new(BigInt::from(k % n), BigInt::from(n))).unwrap())
            .sum();
        let claimed = BigRational::new(BigInt::from(-(n - 1)), BigInt::from(6 * n));
        one_over_6n &= sum == BigRational::new(BigInt::one(), BigInt::from(6 * n));
        if sum != claimed && first_bad.is_none() {
            first_bad = Some((n, sum, claimed));
        }
    }
    match first_bad {
        None => outcome(true, "holds for N <= 1000"),
        Some((n, sum, claimed)) => outcome(
            false,
            format!(
                "N={n}: sum = {sum}, claimed {claimed}; sum equals 1/(6N) for all N <= 1000: {one_over_6n}"
            ),
        ),
    }
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let r = check_prop_j(&CheckOptions { samples: 10_000, seed: 42, ..CheckOptions::default() }).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let spot = prop_j_ratio(&UpperHalfPoint::i(), DEFAULT_TERMS).unwrap();
    let spot_ok = (spot / 2.40e5 - 1.0).abs() <= 0.01;
    let pass = r.pass && r.worst_value <= 330_000.0 && spot_ok && secs < 10.0;
    outcome(pass, format!("worst ratio {:.1}, ratio at i {spot:.1}, {secs:.2}s", r.worst_value))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let r = check_cor_j(&CheckOptions { samples: 10_000, seed: 42, ..CheckOptions::default() }).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let items: Vec<String> = r.items.iter().map(|i| format!("{} {:.3e}", i.name, i.worst_margin)).collect();
    let pass = r.pass && r.items.len() == 3 && r.items.iter().all(|i| i.pass) && secs < 10.0;
    outcome(pass, format!("margins [{}], {secs:.2}s", items.join(", ")))
}

fn criterion_8() -> Outcome {
    let opts = CheckOptions { samples: 1000, seed: 42, ..CheckOptions::default() };
    let mut bad = Vec::new();
    let mut min_d = f64::INFINITY;
    let mut min_global = f64::INFINITY;
    for n in 3..=30u32 {
        let d = check_siegel_d(n, &opts).unwrap();
        let g = check_siegel_global(n, &opts).unwrap();
        min_d = min_d.min(d.worst_value);
        min_global = min_global.min(g.worst_value);
        if !d.pass {
            bad.push(format!("siegel-d N={n}: slack {}", d.worst_value));
        }
        if !g.pass {
            bad.push(format!("siegel-global N={n}: slack {}", g.worst_value));
        }
    }
    let two = check_siegel_d(2, &opts).unwrap();
    let overshoot = -two.worst_value;
    let recorded = two.informational && overshoot > 0.0;
    let detail = format!(
        "N=3..30 min slack D {min_d:.4}, global {min_global:.4}; N=2 overshoot {overshoot:.5} at ({}, {}) (informational){}",
        two.worst_witness.re,
        two.worst_witness.im,
        if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
    );
    outcome(bad.is_empty() && recorded, detail)
}

fn criterion_9() -> Outcome {
    let mut bad = Vec::new();
    let sc = bound_split_cartan(3, SplitCartanBound::TwoRational).unwrap().value;
    let exact = 72.0 * 9f64.ln();
    if (sc - exact).abs() > 8.0 * f64::EPSILON * exact {
        bad.push(format!("split cartan p=3: {sc} vs {exact}"));
    }
    let mut grid = 0;
    for n in 2..=10u32 {
        for s in 1..=3u32 {
            for g in (2..=96u64).step_by(2) {
                grid += 1;
                if !refined_matches_theorem_1_2(n, g, s) {
                    bad.push(format!("identity N={n} |G|={g} s={s}"));
                }
                if s <= 2 {
                    // integer budget: compare the evaluated bounds too
                    let a = BigInt::from(g / 2) * BigInt::from(n * n);
                    let budget = if s == 1 { BigInt::one() } else { BigInt::from(4) * &a };
                    let r = bound_refined(n, g / 2, &budget, false).unwrap().value;
                    let t = bound_theorem_1_2(n, g, s, false).unwrap().value;
                    if (r - t).abs() > 1e-12 * t {
                        bad.push(format!("values N={n} |G|={g} s={s}: {r} vs {t}"));
                    }
                }
            }
        }
    }
    let mut primes = 0;
    let mut tightest = f64::INFINITY;
    for p in (3..=10_000u32).step_by(2).filter(|&p| is_prime(u64::from(p))) {
        primes += 1;
        let r = x0_plus_chain(p).unwrap();
        let target = r.breakdown_value("x0_plus_bound").unwrap();
        tightest = tightest.min(target - r.value);
        if r.value > target {
            bad.push(format!("chain p={p}: {} > {target}", r.value));
        }
    }
    let detail = format!(
        "72 log 9 = {sc}; identity on {grid} grid points; chain over {primes} primes, min gap {tightest:.2}{}",
        if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }
    );
    outcome(bad.is_empty(), detail)
}

fn criterion_10() -> Outcome {
    let configs: Vec<Vec<&str>> = vec![
        vec!["cusps", "--split-cartan", "7"],
        vec!["divisors", "--split-cartan", "5"],
        vec!["orbits", "--group", r#"{"level": 8, "generators": [[[1,1],[0,1]],[[1,0],[0,3]]], "galois": [3]}"#, "--s", "2"],
        vec!["runge-unit", "--split-cartan", "7", "--sigma", "0,2"],
        vec!["bound", "--theorem", "x0-chain", "--p", "101"],
        vec!["verify", "--check", "prop-j", "--samples", "2000", "--seed", "7"],
        vec!["verify", "--check", "siegel-global", "--level", "6", "--samples", "300", "--seed", "9"],
    ];
    let exe = env!("CARGO_BIN_EXE_runge-kit");
    let mut bad = Vec::new();
    for args in &configs {
        let a = render(&cli(args).1);
        let b = render(&cli(args).1);
        let p1 = Command::new(exe).args(args).output().unwrap();
        let p2 = Command::new(exe).args(args).output().unwrap();
        if a != b || p1.stdout != p2.stdout || p1.stdout != a.as_bytes() {
            bad.push(args.join(" "));
        }
    }
    let detail = if bad.is_empty() { format!("{} configs, in-process and subprocess runs identical", configs.len()) } else { format!("differs: {}", bad.join(" | ")) };
    outcome(bad.is_empty(), detail)
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("split Cartan divisors", criterion_1),
        ("split Cartan orbit structure", criterion_2),
        ("rank law and weighted degree", criterion_3),
        ("positive combination property suite", criterion_4),
        ("Bernoulli sum identity", criterion_5),
        ("j expansion ratio on D", criterion_6),
        ("j / q comparison items", criterion_7),
        ("Siegel function estimates", criterion_8),
        ("bound evaluators", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!("{tag} criterion {:>2} {name}: {} [{:.2}s]", i + 1, o.detail, start.elapsed().as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
