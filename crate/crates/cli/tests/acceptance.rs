//! Acceptance criteria, one `criterion N: PASS|FAIL` line each. Runs without
//! the libtest harness so the lines always reach the terminal; the process
//! exits non-zero when any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use zsfusion::bicross::bicrossed_ring;
use zsfusion::crossact::CrossedActionData;
use zsfusion::equivar::equivariantize_pointed;
use zsfusion::fusring::{find_based_iso, fpdim, group_ring, rep_ring, validate_fusion_ring, FusionRing};
use zsfusion::io;
use zsfusion::matched::{derive_matched_pair, product_map, zappa_szep, MatchedPair};
use zsfusion::theorem::{theorem1, TheoremOutcome};
use zsfusion::{suite, Options};

const FPDIM_TOL: f64 = 1e-6;
const ROUND_TRIP_SECS: f64 = 10.0;
const BICROSS_SECS: f64 = 5.0;
const THEOREM_SECS: f64 = 60.0;
const SCAN_SECS: f64 = 5.0;
const SCAN_MAX_RANK: usize = 16;

type Verdict = Result<String, String>;

fn named_pairs() -> Vec<(String, MatchedPair)> {
    vec![
        ("S3 = Z2·Z3".into(), suite::s3_pair()),
        ("A4 = Z3·V4".into(), suite::a4_pair()),
        ("S4 = Z4·S3".into(), suite::s4_pair()),
        ("G trivial".into(), suite::trivial_g_pair()),
        ("Z2 × Z3".into(), suite::direct_product_pair()),
    ]
}

fn suite_pairs() -> Vec<(String, MatchedPair)> {
    let mut out = named_pairs();
    out.extend(suite::bundled_matched_pairs());
    out
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion1() -> Verdict {
    let start = Instant::now();
    let mut count = 0;
    for (name, sigma) in suite::bundled_groups() {
        let fs = sigma.exact_factorizations().map_err(|e| e.to_string())?;
        for (g, k) in fs {
            let mp = derive_matched_pair(&sigma, &g, &k).map_err(|e| e.to_string())?;
            let zs = zappa_szep(&mp).map_err(|e| e.to_string())?;
            let map = product_map(&sigma, &g, &k);
            let mut seen = vec![false; sigma.order()];
            for &x in &map {
                seen[x] = true;
            }
            check(zs.order() == sigma.order() && seen.iter().all(|&s| s), || {
                format!("{name}: (g,k) ↦ gk is not a bijection")
            })?;
            for x in zs.elements() {
                for y in zs.elements() {
                    check(map[zs.mul(x, y)] == sigma.mul(map[x], map[y]), || {
                        format!("{name}: homomorphism fails at ({x}, {y})")
                    })?;
                }
            }
            count += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < ROUND_TRIP_SECS, || format!("took {secs:.2} s"))?;
    Ok(format!("{count} factorizations round-trip exactly in {secs:.2} s"))
}

fn criterion2() -> Verdict {
    let start = Instant::now();
    let pairs = suite_pairs();
    for (name, mp) in &pairs {
        let b = bicrossed_ring(&CrossedActionData::pointed(mp)).map_err(|e| e.to_string())?;
        let target = group_ring(&zappa_szep(mp).map_err(|e| e.to_string())?);
        let iso = find_based_iso(&b.ring, &target).map_err(|e| e.to_string())?;
        check(iso.is_some_and(|i| i.check(&b.ring, &target)), || {
            format!("{name}: no based isomorphism")
        })?;
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < BICROSS_SECS, || format!("took {secs:.2} s"))?;
    Ok(format!("{} pairs match exactly in {secs:.2} s", pairs.len()))
}

fn criterion3() -> Verdict {
    let mut cases: Vec<(String, CrossedActionData)> = suite_pairs()
        .into_iter()
        .map(|(n, mp)| (n, CrossedActionData::pointed(&mp)))
        .collect();
    for n in [3, 5] {
        let d = suite::ty_inversion(&suite::cyclic(n)).map_err(|e| e.to_string())?;
        cases.push((format!("TY(Z{n})"), d));
    }
    let mut worst = 0f64;
    for (name, d) in &cases {
        let b = bicrossed_ring(d).map_err(|e| e.to_string())?;
        let total = fpdim(&b.ring).map_err(|e| e.to_string())?.total;
        let expected = d.mp.g().order() as f64 * fpdim(&d.ring).map_err(|e| e.to_string())?.total;
        let err = (total - expected).abs();
        worst = worst.max(err);
        check(err <= FPDIM_TOL, || format!("{name}: {total} vs {expected}"))?;
    }
    Ok(format!("{} cases, max error {worst:.1e}", cases.len()))
}

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_zsfusion")
}

fn write_pair(dir: &Path, i: usize, mp: &MatchedPair) -> PathBuf {
    let path = dir.join(format!("pair{i}.json"));
    std::fs::write(&path, io::matched_pair_json(mp).to_string()).unwrap();
    path
}

/// Runs `zsfusion --json --no-timings theorem1` and returns the exit code
/// and stdout.
fn run_theorem1(path: &Path, seed: u64, threads: usize) -> (i32, String) {
    let out = Command::new(binary())
        .args(["--json", "--no-timings", "--seed", &seed.to_string(), "theorem1"])
        .arg(path)
        .env("RAYON_NUM_THREADS", threads.to_string())
        .output()
        .expect("run the binary");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn criterion4(dir: &Path) -> Verdict {
    let mut times = Vec::new();
    for (i, (name, mp)) in named_pairs().iter().enumerate() {
        let path = write_pair(dir, i, mp);
        let start = Instant::now();
        let (code, stdout) = run_theorem1(&path, 0, 4);
        let secs = start.elapsed().as_secs_f64();
        check(code == 0, || format!("{name}: exit {code}: {stdout}"))?;
        check(secs < THEOREM_SECS, || format!("{name}: took {secs:.2} s"))?;
        times.push(format!("{secs:.1}"));
    }
    Ok(format!("5 pairs exit 0 (seconds: {})", times.join(", ")))
}

fn criterion5(outcomes: &[(String, MatchedPair, TheoremOutcome)]) -> Verdict {
    for (name, mp, out) in outcomes {
        let sum: usize = out.extension_ring.simples.iter().map(|s| s.dim * s.dim).sum();
        check(sum == mp.g().order() * mp.gamma().order(), || {
            format!("{name}: Σ dim² = {sum}")
        })?;
        let h = mp.g().order();
        check(out.dual_ring.simples.iter().all(|s| s.dim % h == 0), || {
            format!("{name}: a dual simple has dimension not divisible by |H|")
        })?;
        let dual_sum: usize = out.dual_ring.simples.iter().map(|s| (s.dim / h).pow(2)).sum();
        check(dual_sum == mp.g().order() * mp.gamma().order(), || {
            format!("{name}: Σ (dim/|H|)² = {dual_sum}")
        })?;
    }
    Ok(format!("{} instances exact", outcomes.len()))
}

fn criterion6(outcomes: &[(String, MatchedPair, TheoremOutcome)]) -> Verdict {
    for (name, _, out) in outcomes {
        let bad: Vec<&str> = out
            .report
            .violations
            .iter()
            .map(|v| v.axiom.as_str())
            .filter(|a| a.starts_with("extension: "))
            .collect();
        check(bad.is_empty(), || format!("{name}: {bad:?}"))?;
    }
    Ok(format!("{} equivariantized rings pass", outcomes.len()))
}

/// Row-reduction rank of a real matrix.
fn rank_real(mut rows: Vec<Vec<f64>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).max_by(|&i, &j| rows[i][c].abs().total_cmp(&rows[j][c].abs()))
        else {
            break;
        };
        if rows[p][c].abs() < 1e-9 {
            continue;
        }
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank {
                let f = rows[i][c] / rows[rank][c];
                for j in 0..cols {
                    rows[i][j] -= f * rows[rank][j];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// A `Z2`-equivariant graded object: degrees and the generator's matrix.
struct Small {
    degrees: Vec<usize>,
    t: Vec<Vec<f64>>,
}

/// `dim Hom(S, T)` as unknowns minus the rank of the intertwining equations.
fn hom_dim(s: &Small, t: &Small) -> usize {
    let (m, n) = (t.degrees.len(), s.degrees.len());
    let vars: Vec<(usize, usize)> = (0..m)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| t.degrees[r] == s.degrees[c])
        .collect();
    let mut rows = Vec::new();
    for r in 0..m {
        for c in 0..n {
            rows.push(
                vars.iter()
                    .map(|&(i, j)| {
                        let mut v = 0.0;
                        if j == c {
                            v += t.t[r][i];
                        }
                        if i == r {
                            v -= s.t[j][c];
                        }
                        v
                    })
                    .collect(),
            );
        }
    }
    vars.len() - rank_real(rows)
}

fn criterion7() -> Verdict {
    let d = CrossedActionData::pointed(&suite::s3_pair());
    let eq = equivariantize_pointed(&d, &Options::default()).map_err(|e| e.to_string())?;
    let fps: Vec<f64> = eq.simples.iter().map(|s| s.fp).collect();
    check(fps == [1.0, 1.0, 2.0], || format!("FP-dims {fps:?}"))?;

    let gamma = d.mp.gamma();
    let a = suite::element(gamma, "(1 2 3)");
    let a2 = gamma.mul(a, a);
    let e = gamma.identity();
    let unit = Small { degrees: vec![e], t: vec![vec![1.0]] };
    let sign = Small { degrees: vec![e], t: vec![vec![-1.0]] };
    let x = Small { degrees: vec![a, a2], t: vec![vec![0.0, 1.0], vec![1.0, 0.0]] };
    let mut xx = Small { degrees: Vec::new(), t: vec![vec![0.0; 4]; 4] };
    for p in 0..4 {
        xx.degrees.push(gamma.mul(x.degrees[p / 2], x.degrees[p % 2]));
        for q in 0..4 {
            xx.t[p][q] = x.t[p / 2][q / 2] * x.t[p % 2][q % 2];
        }
    }
    let oracle = [hom_dim(&unit, &xx), hom_dim(&sign, &xx), hom_dim(&x, &xx)];
    check(oracle == [1, 1, 1], || format!("oracle multiplicities {oracle:?}"))?;

    let unit_label = eq.ring.unit();
    let xl = 2;
    let eps = 1 - unit_label;
    let computed = [eq.ring.n(xl, xl, unit_label), eq.ring.n(xl, xl, eps), eq.ring.n(xl, xl, xl)];
    check(computed.iter().map(|&m| m as usize).eq(oracle), || {
        format!("X⊗X multiplicities {computed:?}")
    })?;
    let s3 = rep_ring(&suite::symmetric3()).map_err(|e| e.to_string())?;
    check(find_based_iso(&eq.ring, &s3).map_err(|e| e.to_string())?.is_some(), || {
        "not isomorphic to K(Rep S3)".into()
    })?;
    Ok("FP-dims {1, 1, 2}, X⊗X = 1 + ε + X".into())
}

fn criterion8(outcomes: &[(String, MatchedPair, TheoremOutcome)]) -> Verdict {
    let mut rings: Vec<(String, FusionRing)> = Vec::new();
    for (name, mp, out) in outcomes {
        rings.push((format!("{name} extension"), out.extension_ring.ring.clone()));
        rings.push((format!("{name} dual"), out.dual_ring.ring.clone()));
        let b = bicrossed_ring(&CrossedActionData::pointed(mp)).map_err(|e| e.to_string())?;
        rings.push((format!("{name} bicrossed"), b.ring));
    }
    for n in [3, 5] {
        let d = suite::ty_inversion(&suite::cyclic(n)).map_err(|e| e.to_string())?;
        rings.push((format!("TY(Z{n}) bicrossed"), bicrossed_ring(&d).map_err(|e| e.to_string())?.ring));
    }
    let mut scanned = 0;
    let mut slowest = 0f64;
    for (name, r) in rings.iter().filter(|(_, r)| r.rank() <= SCAN_MAX_RANK) {
        let start = Instant::now();
        let rep = validate_fusion_ring(r);
        let secs = start.elapsed().as_secs_f64();
        slowest = slowest.max(secs);
        check(rep.is_ok(), || format!("{name}: {rep}"))?;
        check(secs < SCAN_SECS, || format!("{name}: took {secs:.2} s"))?;
        scanned += 1;
    }
    Ok(format!("{scanned} rings of rank ≤ {SCAN_MAX_RANK} associative, slowest {slowest:.3} s"))
}

fn criterion9(dir: &Path) -> Verdict {
    let mut runs = 0;
    for (i, (name, mp)) in named_pairs().iter().enumerate() {
        let path = write_pair(dir, 100 + i, mp);
        let mut reference: Option<(Vec<(usize, usize, usize, u32)>, Vec<(usize, usize, usize, u32)>, i32)> =
            None;
        for threads in [1, 4] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            for seed in [0, 1, 2] {
                let out = pool
                    .install(|| theorem1(mp, &Options::with_seed(seed)))
                    .map_err(|e| e.to_string())?;
                let (code, _) = run_theorem1(&path, seed, threads);
                let got = (out.extension_ring.ring.triples(), out.dual_ring.ring.triples(), code);
                match &reference {
                    None => reference = Some(got),
                    Some(r) => check(*r == got, || {
                        format!("{name}: differs at seed {seed}, {threads} thread(s)")
                    })?,
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} runs agree across seeds {{0, 1, 2}} and 1 vs 4 threads"))
}

fn main() {
    let dir = tempfile::tempdir().expect("temporary directory");
    let opts = Options::default();
    let outcomes: Result<Vec<(String, MatchedPair, TheoremOutcome)>, String> = suite_pairs()
        .into_iter()
        .map(|(name, mp)| {
            let out = theorem1(&mp, &opts).map_err(|e| format!("{name}: {e}"))?;
            Ok((name, mp, out))
        })
        .collect();

    let shared = |f: fn(&[(String, MatchedPair, TheoremOutcome)]) -> Verdict| match &outcomes {
        Ok(o) => f(o),
        Err(e) => Err(e.clone()),
    };
    let verdicts: Vec<Verdict> = vec![
        criterion1(),
        criterion2(),
        criterion3(),
        criterion4(dir.path()),
        shared(criterion5),
        shared(criterion6),
        criterion7(),
        shared(criterion8),
        criterion9(dir.path()),
    ];
    let mut failed = 0;
    for (i, v) in verdicts.iter().enumerate() {
        match v {
            Ok(msg) => println!("criterion {}: PASS ({msg})", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL ({msg})", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
