//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. Criterion 10 runs only with `--features slow-tests`.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use gradop::bigprobe::{bigness_evidence, reverify_jumps, tangent_twist};
use gradop::diffop::{
    euler_operator, graded_operator_space, negative_degree_scan, operator_grid, operator_space_dim, stabilized_oracle,
    OpSpaceOptions,
};
use gradop::exactlinalg::RankMode;
use gradop::field::{Field, PrimeField, Rationals};
use gradop::fsing::{fedder_sweep, verify_witness};
use gradop::hypervanish::{verify_certificate, Engine, VanishCertificate};
use gradop::polyring::{default_var_names, parse_poly_with, RingSpec};
use gradop::projcoh::{check_euler_identity, check_serre_duality, sym_omega_cohomology, sym_tangent_cohomology, CohomMemo};

type Outcome = Result<String, String>;

fn ring(vars: &[&str], rels: &[&str]) -> RingSpec<Rationals> {
    RingSpec::new(Rationals, vars, rels).expect("ring")
}

fn bgg() -> RingSpec<Rationals> {
    ring(&["x", "y", "z"], &["x^3+y^3+z^3"])
}
fn fermat4() -> RingSpec<Rationals> {
    ring(&["x", "y", "z", "w"], &["x^3+y^3+z^3+w^3"])
}
fn quadric() -> RingSpec<Rationals> {
    ring(&["x", "y", "z", "w"], &["x*w-y*z"])
}
fn quadric_cone3() -> RingSpec<Rationals> {
    ring(&["x", "y", "z"], &["x*z-y^2"])
}
fn dp4() -> RingSpec<Rationals> {
    ring(&["a", "b", "c", "d", "e"], &["a^2+b^2+c^2+d^2+e^2", "a^2+2*b^2+3*c^2+4*d^2+5*e^2"])
}

fn within(start: Instant, limit: Duration, detail: String) -> Outcome {
    let t = start.elapsed();
    if t <= limit {
        Ok(format!("{detail} ({:.1}s)", t.as_secs_f64()))
    } else {
        Err(format!("{detail} but took {:.1}s, limit {}s", t.as_secs_f64(), limit.as_secs()))
    }
}

fn zero_grid<F: Field>(spec: &RingSpec<F>, m_max: u32, e_min: i64, opts: OpSpaceOptions) -> Result<usize, String> {
    let cells = operator_grid(spec, m_max, e_min, -1, opts);
    match cells.iter().find(|c| c.dim != 0) {
        None => Ok(cells.len()),
        Some(c) => Err(format!("dim at m={}, e={} is {}", c.m, c.e, c.dim)),
    }
}

fn c1() -> Outcome {
    let t = Instant::now();
    let n = zero_grid(&bgg(), 5, -3, OpSpaceOptions::default())?;
    within(t, Duration::from_secs(120), format!("BGG cone: {n} cells with 1<=m<=5, -3<=e<=-1 all zero"))
}

fn c2() -> Outcome {
    let spec = fermat4();
    let t = Instant::now();
    let n = zero_grid(&spec, 4, -3, OpSpaceOptions::default())?;
    let exact = within(t, Duration::from_secs(20 * 60), format!("exact: {n} cells zero"))?;
    let t = Instant::now();
    let mm = OpSpaceOptions { rank_mode: RankMode::MultiModular { primes: 3, seed: 7 }, ..Default::default() };
    zero_grid(&spec, 4, -3, mm)?;
    let modular = within(t, Duration::from_secs(5 * 60), "multi-modular: zero".to_string())?;
    Ok(format!("Fermat cubic cone in 4 variables; {exact}; {modular}"))
}

fn c3() -> Outcome {
    let t = Instant::now();
    let r = negative_degree_scan(&quadric(), 3, -1);
    let (m, e) = r.first_nonzero.ok_or("no nonzero cell with m <= 3")?;
    let (op, replay) = r.witness.as_ref().ok_or("no witness")?;
    if !replay.passed() {
        return Err(format!("witness failed replay on {:?}", replay.failure));
    }
    if replay.samples < 20 {
        return Err(format!("only {} replay samples", replay.samples));
    }
    let shown = op.display_with(&quadric().vars().to_vec());
    within(
        t,
        Duration::from_secs(300),
        format!("quadric cone: first nonzero cell m={m}, e={e} (dim {}); witness {shown} replays on {} products", r.dim(m, e).unwrap_or(0), replay.samples),
    )
}

fn c4() -> Outcome {
    let mut specs: Vec<(String, RingSpec<Rationals>)> =
        (1..=4).map(|n| (format!("polynomial ring, {n} vars"), RingSpec::polynomial_ring(Rationals, n).unwrap())).collect();
    specs.push(("Fermat cubic, 3 vars".into(), bgg()));
    specs.push(("Fermat cubic, 4 vars".into(), fermat4()));
    specs.push(("quadric cone xw-yz".into(), quadric()));
    specs.push(("quadric cone xz-y^2".into(), quadric_cone3()));
    specs.push(("two quadrics, 5 vars".into(), dp4()));
    for (name, spec) in &specs {
        let space = graded_operator_space(spec, 1, 0);
        if space.dim == 0 || !space.contains(spec, &euler_operator(Rationals, spec.nvars())) {
            return Err(format!("{name}: dim (D^1)_0 = {}, Euler in span: false", space.dim));
        }
    }
    Ok(format!("Euler operator in (D^1)_0 for all {} corpus rings", specs.len()))
}

fn c5() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    for n in 3..=5u32 {
        for m in 1..=6u32 {
            for e in -10..=10i64 {
                let o = sym_omega_cohomology(n, m, e).map_err(|x| x.to_string())?;
                let tt = sym_tangent_cohomology(n, m, -e - n as i64 - 1).map_err(|x| x.to_string())?;
                let at = format!("n={n} m={m} e={e}");
                if e < m as i64 + 1 && o.h[0] != 0 {
                    return Err(format!("{at}: h0 = {}", o.h[0]));
                }
                if e < m as i64 - 1 && o.h[1] != 0 {
                    return Err(format!("{at}: h1 = {}", o.h[1]));
                }
                if let Some(i) = (2..n as usize).find(|&i| o.h[i] != 0) {
                    return Err(format!("{at}: h{i} = {}", o.h[i]));
                }
                check_euler_identity(&o)?;
                check_euler_identity(&tt)?;
                check_serre_duality(&o, &tt)?;
                count += 1;
            }
        }
    }
    within(t, Duration::from_secs(600), format!("{count} tables on n in 3..5, m<=6, -10<=e<=10 satisfy the vanishing ranges, χ and duality"))
}

fn run_cli(args: &[&str], out: &Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_gradop"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("run gradop");
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn c6() -> Outcome {
    let t = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (code, stdout) = run_cli(&["vanish", "--ambient", "3", "--degree", "3", "--sym-max", "20"], dir.path());
    if code != 0 {
        return Err(format!("vanish exited with {code}"));
    }
    let want = "H⁰(X, Sym^m T_X) = 0 certified for m = 1..20";
    if !stdout.contains(want) {
        return Err(format!("summary was {stdout:?}"));
    }
    // replay every written certificate with a fresh table cache
    let memo = CohomMemo::new();
    for m in 1..=20 {
        let path = dir.path().join(format!("certificates/m{m:02}.json"));
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cert: VanishCertificate = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        verify_certificate(&cert, &memo).map_err(|e| format!("m={m}: {e}"))?;
    }
    let eng = Engine::new();
    for m in 1..=20 {
        if eng.sym_tangent_h0(2, m).map_err(|e| e.to_string())?.is_certified() {
            return Err(format!("quadric certified at m={m}"));
        }
    }
    within(t, Duration::from_secs(120), "cubic surface: 20 certificates replayed; quadric: Unknown for m<=20".to_string())
}

fn c7() -> Outcome {
    let eng = Engine::new();
    let q = quadric();
    let r = bigness_evidence(&q, 1, 3);
    reverify_jumps(&q, &r)?;
    let j = r.jump(1).ok_or("no jump on the quadric at e=1")?;
    if eng.intrinsic_h0_vanishing(3, 2, j.m, tangent_twist(2, j.m, 1)).map_err(|e| e.to_string())?.is_certified() {
        return Err(format!("quadric: jump at m={} but the node is certified", j.m));
    }
    let c = fermat4();
    let r = bigness_evidence(&c, 3, 4);
    if let Some(rec) = r.records.iter().find(|x| x.found.is_some()) {
        return Err(format!("cubic: unexpected jump at e={}", rec.e));
    }
    let mut nodes = 0;
    for m in 1..=4 {
        for e in 1..=3 {
            let v = eng.intrinsic_h0_vanishing(3, 3, m, tangent_twist(3, m, e)).map_err(|x| x.to_string())?;
            let cert = v.certificate().ok_or(format!("cubic: node m={m}, e={e} not certified"))?;
            verify_certificate(cert, eng.memo())?;
            nodes += 1;
        }
    }
    Ok(format!("quadric jump at m={}, e=1 (size {}) with Unknown node; cubic: no jumps for m<=4, {nodes} nodes certified", j.m, j.size))
}

fn c8() -> Outcome {
    let t = Instant::now();
    let mut cells = 0;
    for (name, spec) in [("BGG cone", bgg()), ("quadric cone xz-y^2", quadric_cone3()), ("quadric cone xw-yz", quadric())] {
        for m in 1..=2 {
            for e in -2..=1 {
                let dim = operator_space_dim(&spec, m, e);
                let cap = gradop::diffop::oracle_min_cap(&spec, m, e) + 4;
                let o = stabilized_oracle(&spec, m, e, cap).map_err(|x| x.to_string())?;
                if o.dim != dim {
                    return Err(format!("{name} m={m} e={e}: operator space {dim}, oracle {} at cap {}", o.dim, o.d_cap));
                }
                cells += 1;
            }
        }
    }
    within(t, Duration::from_secs(600), format!("{cells} cells agree at stabilized caps"))
}

fn c9() -> Outcome {
    let t = Instant::now();
    let primes: Vec<u64> = (5..=37).filter(|&p| primal_is_prime(p)).collect();
    let vars = default_var_names(3);
    let verdicts = fedder_sweep("x^3+y^3+z^3", &vars, &primes).map_err(|e| e.to_string())?;
    for v in &verdicts {
        if v.f_pure != (v.p % 3 == 1) {
            return Err(format!("p={}: f_pure = {}", v.p, v.f_pure));
        }
        let f = parse_poly_with("x^3+y^3+z^3", &PrimeField::new(v.p).unwrap(), &vars).unwrap();
        verify_witness(&f, v).map_err(|e| format!("p={}: {e}", v.p))?;
    }
    within(t, Duration::from_secs(60), format!("{} primes in 5..37: F-pure exactly when p = 1 mod 3; witnesses re-verified", primes.len()))
}

fn primal_is_prime(p: u64) -> bool {
    (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

#[cfg(feature = "slow-tests")]
fn c10() -> Outcome {
    let spec = RingSpec::new(PrimeField::new(5).unwrap(), &["x", "y", "z", "w"], &["x^3+y^3+z^3+w^3"]).unwrap();
    let t = Instant::now();
    let r = negative_degree_scan(&spec, 10, -1);
    let dims: Vec<String> = r.cells.iter().map(|c| c.dim.to_string()).collect();
    let found = match (&r.first_nonzero, &r.witness) {
        (Some((m, _)), Some((_, replay))) => {
            if !replay.passed() {
                return Err(format!("witness at m={m} failed replay: {:?}", replay.failure));
            }
            format!("first operator at m={m}, witness replays on {} products", replay.samples)
        }
        _ => r.note(),
    };
    within(t, Duration::from_secs(3600), format!("F_5 Fermat cubic, e=-1, dims for m=1..10: [{}]; {found}", dims.join(", ")))
}

fn x4_inequality() -> Outcome {
    let s = dp4();
    let (d1, d2) = (operator_space_dim(&s, 1, 0), operator_space_dim(&s, 2, 0));
    if d2 < d1 || d2 - d1 > 2 {
        return Err(format!("dim D^2_0 - dim D^1_0 = {d2} - {d1}"));
    }
    Ok(format!("degree 4 del Pezzo: dim D^2_0 - dim D^1_0 = {d2} - {d1} <= 2"))
}

fn main() {
    let mut criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("1", c1),
        ("2", c2),
        ("3", c3),
        ("4", c4),
        ("5", c5),
        ("6", c6),
        ("7", c7),
        ("8", c8),
        ("9", c9),
    ];
    #[cfg(feature = "slow-tests")]
    criteria.push(("10", c10));
    criteria.push(("X4", x4_inequality));

    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    #[cfg(not(feature = "slow-tests"))]
    println!("SKIP criterion 10: slow suite, run with --features slow-tests");
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
