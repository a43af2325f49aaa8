use gradop::bigprobe::{bigness_evidence, reverify_jumps};
use gradop::diffop::{operator_grid, operator_space_dim, stabilized_oracle, ConstraintSet, OpSpaceOptions};
use gradop::exactlinalg::RankMode;
use gradop::field::{Field, FieldSpec};
use gradop::fsing::{fedder_f_pure, verify_witness};
use gradop::hypervanish::{verify_certificate, Engine, Verdict};
use gradop::polyring::{parse_poly_with, RingSpec};
use gradop::projcoh::{
    check_euler_identity, check_serre_duality, line_cohomology, sym_omega_cohomology_over, sym_tangent_cohomology_over,
    CohomMemo, CohomTable,
};
use gradop::{error::CohomError, field::PrimeField};

use crate::ringfile::load_ring;
use crate::{with_ring, BundleArg, Cli, CliError, Command, Constraints, Ctx, VanishTarget, ORDER_MAX_CAP, SYM_MAX_CAP};

pub fn run(cli: &Cli, ctx: &mut Ctx) -> Result<(), CliError> {
    match &cli.command {
        Command::Ops(a) => {
            check_order(a.order_max)?;
            check_range("degree", a.degree_min, a.degree_max)?;
            let ring = load_ring(&a.ring)?;
            ctx.field = Some(ring.field_spec().to_string());
            let opts = OpSpaceOptions {
                constraints: match a.constraints {
                    Constraints::Commutators => ConstraintSet::Commutators,
                    Constraints::Multipliers => ConstraintSet::Multipliers,
                },
                rank_mode: match a.multimodular {
                    Some(0) => return Err(CliError::Input("--multimodular needs at least one prime".into())),
                    Some(primes) => RankMode::MultiModular { primes, seed: a.seed },
                    None => RankMode::Exact,
                },
            };
            with_ring!(&ring, s => ops(ctx, s, a.order_max, a.degree_min, a.degree_max, opts))
        }
        Command::PnCoh(a) => pn_coh(ctx, a),
        Command::Vanish(a) => vanish(ctx, a),
        Command::BigProbe(a) => {
            check_order(a.order_max)?;
            if a.e_max == 0 {
                return Err(CliError::Input("--e-max must be at least 1".into()));
            }
            let ring = load_ring(&a.ring)?;
            ctx.field = Some(ring.field_spec().to_string());
            with_ring!(&ring, s => big_probe(ctx, s, a.e_max, a.order_max))
        }
        Command::Fedder(a) => fedder(ctx, a),
        Command::Oracle(a) => {
            check_order(a.order_max)?;
            check_range("degree", a.degree_min, a.degree_max)?;
            let ring = load_ring(&a.ring)?;
            ctx.field = Some(ring.field_spec().to_string());
            with_ring!(&ring, s => oracle(ctx, s, a))
        }
    }
}

fn check_order(m: u32) -> Result<(), CliError> {
    if m == 0 || m > ORDER_MAX_CAP {
        return Err(CliError::Input(format!("--order-max must be in 1..={ORDER_MAX_CAP}, got {m}")));
    }
    Ok(())
}

fn check_sym(lo: u32, hi: u32) -> Result<(), CliError> {
    if lo == 0 || hi < lo || hi > SYM_MAX_CAP {
        return Err(CliError::Input(format!("symmetric powers must satisfy 1 <= sym-min <= sym-max <= {SYM_MAX_CAP}")));
    }
    Ok(())
}

fn check_range(what: &str, lo: i64, hi: i64) -> Result<(), CliError> {
    if lo > hi {
        return Err(CliError::Input(format!("empty {what} range {lo}..={hi}")));
    }
    if lo < -64 || hi > 64 {
        return Err(CliError::Input(format!("{what} range {lo}..={hi} exceeds -64..=64")));
    }
    Ok(())
}

fn ops<F: Field>(ctx: &mut Ctx, spec: &RingSpec<F>, m_max: u32, e_min: i64, e_max: i64, opts: OpSpaceOptions) -> Result<(), CliError> {
    let cells = operator_grid(spec, m_max, e_min, e_max, opts);
    let mut header = vec!["m".to_string()];
    header.extend((e_min..=e_max).map(|e| format!("e={e}")));
    let width = (e_max - e_min + 1) as usize;
    let rows: Vec<Vec<String>> = cells
        .chunks(width)
        .map(|row| {
            let mut r = vec![row[0].m.to_string()];
            r.extend(row.iter().map(|c| c.dim.to_string()));
            r
        })
        .collect();
    ctx.out.write_table("ops", ctx.format, &header, &rows)?;
    let neg: Vec<_> = cells.iter().filter(|c| c.e < 0 && c.dim > 0).collect();
    ctx.summary.push(match neg.first() {
        None if e_min < 0 => format!("no operators of negative degree for m <= {m_max}, {e_min} <= e <= -1"),
        None => "grid has no negative degrees".to_string(),
        Some(c) => format!("{} nonzero negative-degree cells; first at m={}, e={} (dim {})", neg.len(), c.m, c.e, c.dim),
    });
    Ok(())
}

fn cohom_error(e: CohomError) -> CliError {
    match e {
        CohomError::Invariant(_) => CliError::Internal(e.to_string()),
        _ => CliError::Input(e.to_string()),
    }
}

fn pn_coh(ctx: &mut Ctx, a: &crate::PnCohArgs) -> Result<(), CliError> {
    check_range("twist", a.twist_min, a.twist_max)?;
    if a.bundle != BundleArg::Line {
        check_sym(a.sym_min, a.sym_max)?;
    }
    let field: FieldSpec = a.field.parse().map_err(|e: gradop::error::FieldError| CliError::Input(e.to_string()))?;
    ctx.field = Some(field.to_string());
    let nmax = *a.ambient.iter().max().expect("required");
    let memo = CohomMemo::new();
    let mut rows = Vec::new();
    let mut tables = Vec::new();
    let ms: Vec<u32> = if a.bundle == BundleArg::Line { vec![0] } else { (a.sym_min..=a.sym_max).collect() };
    for &n in &a.ambient {
        for &m in &ms {
            for e in a.twist_min..=a.twist_max {
                let t = match a.bundle {
                    BundleArg::Omega => sym_omega_cohomology_over(field, n, m, e),
                    BundleArg::Tangent => sym_tangent_cohomology_over(field, n, m, e),
                    BundleArg::Line => line_cohomology(n, e),
                }
                .map_err(cohom_error)?;
                check_euler_identity(&t).map_err(CliError::Internal)?;
                // dual table through the other sequence
                let dual_e = -e - n as i64 - 1;
                let duality = match a.bundle {
                    BundleArg::Omega => {
                        let d = memo.get(n, gradop::projcoh::Bundle::SymTangent, m, dual_e).map_err(cohom_error)?;
                        check_serre_duality(&t, &d).map_err(CliError::Internal)?;
                        "ok"
                    }
                    BundleArg::Tangent => {
                        let d = memo.get(n, gradop::projcoh::Bundle::SymOmega, m, dual_e).map_err(cohom_error)?;
                        check_serre_duality(&d, &t).map_err(CliError::Internal)?;
                        "ok"
                    }
                    BundleArg::Line => "",
                };
                rows.push(cohom_row(&t, nmax, duality));
                tables.push(t);
            }
        }
    }
    let mut header: Vec<String> = ["n", "bundle", "m", "e"].iter().map(|s| s.to_string()).collect();
    header.extend((0..=nmax).map(|i| format!("h{i}")));
    header.extend(["chi".to_string(), "serre_duality".to_string()]);
    ctx.out.write_table("cohomology", ctx.format, &header, &rows)?;
    ctx.summary.push(format!("{} tables; Euler characteristic identity holds for all", tables.len()));
    Ok(())
}

fn cohom_row(t: &CohomTable, nmax: u32, duality: &str) -> Vec<String> {
    let mut r = vec![t.n.to_string(), t.bundle.to_string(), t.m.to_string(), t.e.to_string()];
    r.extend((0..=nmax as usize).map(|i| t.h.get(i).map_or(String::new(), |h| h.to_string())));
    r.push(t.euler_char.to_string());
    r.push(duality.to_string());
    r
}

fn vanish(ctx: &mut Ctx, a: &crate::VanishArgs) -> Result<(), CliError> {
    check_sym(a.sym_min, a.sym_max)?;
    let eng = Engine::new();
    let replay_memo = CohomMemo::new();
    let mut rows = Vec::new();
    let mut certified = Vec::new();
    let mut unknown = Vec::new();
    for m in a.sym_min..=a.sym_max {
        let (e, verdict) = match a.target {
            VanishTarget::Tangent => {
                if a.ambient != 3 {
                    return Err(CliError::Input("the tangent target needs --ambient 3".into()));
                }
                (m as i64 * (4 - a.degree as i64), eng.sym_tangent_h0(a.degree, m))
            }
            VanishTarget::Intrinsic => {
                let e = a.twist_slope * m as i64 + a.twist;
                (e, eng.intrinsic_h0_vanishing(a.ambient, a.degree, m, e))
            }
            VanishTarget::Restricted => {
                let e = a.twist_slope * m as i64 + a.twist;
                (e, eng.restricted_vanishing(a.ambient, a.degree, m, e, a.index))
            }
        };
        let verdict = verdict.map_err(|err| match err {
            gradop::error::VanishError::Cohom(c) => cohom_error(c),
            other => CliError::Input(other.to_string()),
        })?;
        match &verdict {
            Verdict::CertifiedZero(c) => {
                verify_certificate(c, &replay_memo).map_err(|msg| CliError::Internal(format!("certificate m={m}: {msg}")))?;
                ctx.out.write_json(&format!("certificates/m{m:02}.json"), c)?;
                rows.push(vec![m.to_string(), e.to_string(), "certified-zero".into(), c.size().to_string(), String::new()]);
                certified.push(m);
            }
            Verdict::Unknown { blocking } => {
                let why: Vec<String> = blocking.iter().map(|(n, v)| format!("{n} = {v}")).collect();
                rows.push(vec![m.to_string(), e.to_string(), "unknown".into(), String::new(), why.join("; ")]);
                unknown.push(m);
            }
        }
    }
    let header: Vec<String> = ["m", "e", "verdict", "nodes", "blocking"].iter().map(|s| s.to_string()).collect();
    ctx.out.write_table("vanish", ctx.format, &header, &rows)?;
    let what = match a.target {
        VanishTarget::Tangent => "H⁰(X, Sym^m T_X) = 0".to_string(),
        VanishTarget::Intrinsic => format!("H⁰(X, Sym^m Ω_X({}m{:+})) = 0", a.twist_slope, a.twist),
        VanishTarget::Restricted => format!("H^{}(X, Sym^m Ω_P|X({}m{:+})) = 0", a.index, a.twist_slope, a.twist),
    };
    let mut summary = Vec::new();
    if !certified.is_empty() {
        summary.push(format!("{what} certified for m = {}", ranges(&certified)));
    }
    if !unknown.is_empty() {
        summary.push(format!("unknown for m = {}", ranges(&unknown)));
    }
    let text = summary.join("\n") + "\n";
    ctx.out.write("summary.txt", text.as_bytes())?;
    ctx.summary.extend(summary);
    Ok(())
}

/// `1..20` or `1..3, 5, 7..9`.
fn ranges(ms: &[u32]) -> String {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < ms.len() {
        let mut j = i;
        while j + 1 < ms.len() && ms[j + 1] == ms[j] + 1 {
            j += 1;
        }
        parts.push(if i == j { ms[i].to_string() } else { format!("{}..{}", ms[i], ms[j]) });
        i = j + 1;
    }
    parts.join(", ")
}

fn big_probe<F: Field>(ctx: &mut Ctx, spec: &RingSpec<F>, e_max: u32, m_max: u32) -> Result<(), CliError> {
    let report = bigness_evidence(spec, e_max, m_max);
    reverify_jumps(spec, &report).map_err(CliError::Internal)?;
    if report.degree_zero.iter().any(|&d| d == 0) {
        return Err(CliError::Internal("degree-0 operator space without the Euler operator".into()));
    }
    ctx.out.write_json("bigness.json", &report)?;
    let header: Vec<String> = ["e", "jump_m", "jump_size", "dims"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<String>> = report
        .records
        .iter()
        .map(|r| {
            let dims: Vec<String> = r.dims.iter().map(|d| d.to_string()).collect();
            vec![
                r.e.to_string(),
                r.found.map_or(String::new(), |j| j.m.to_string()),
                r.found.map_or(String::new(), |j| j.size.to_string()),
                dims.join(" "),
            ]
        })
        .collect();
    ctx.out.write_table("bigness", ctx.format, &header, &rows)?;
    if !report.assert_smooth_proj {
        ctx.summary.push("note: ring file does not assert that Proj is smooth; jumps are interpreted under that hypothesis".into());
    }
    ctx.summary.extend(report.summary());
    Ok(())
}

/// Identifiers in order of first appearance.
fn infer_vars(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut cur = String::new();
    for ch in text.chars().chain(std::iter::once(' ')) {
        if ch.is_ascii_alphabetic() || ch == '_' || (!cur.is_empty() && ch.is_ascii_digit()) {
            cur.push(ch);
        } else if !cur.is_empty() {
            if !out.contains(&cur) {
                out.push(cur.clone());
            }
            cur.clear();
        }
    }
    out
}

fn fedder(ctx: &mut Ctx, a: &crate::FedderArgs) -> Result<(), CliError> {
    let vars = a.vars.clone().unwrap_or_else(|| infer_vars(&a.poly));
    if vars.is_empty() {
        return Err(CliError::Input("polynomial has no variables".into()));
    }
    let mut rows = Vec::new();
    for &p in &a.primes {
        let field = PrimeField::new(p).map_err(|e| CliError::Input(e.to_string()))?;
        let f = parse_poly_with(&a.poly, &field, &vars).map_err(|e| CliError::Input(format!("--poly: {e}")))?;
        let v = fedder_f_pure(&f, p).map_err(|e| CliError::Input(e.to_string()))?;
        verify_witness(&f, &v).map_err(|msg| CliError::Internal(format!("p={p}: {msg}")))?;
        let (w, c) = v.witness.as_ref().map_or((String::new(), String::new()), |w| (w.display_with(&vars), w.coefficient.to_string()));
        rows.push(vec![p.to_string(), v.f_pure.to_string(), w, c, v.candidates.to_string()]);
    }
    let header: Vec<String> = ["prime", "f_pure", "witness", "coefficient", "candidates"].iter().map(|s| s.to_string()).collect();
    ctx.out.write_table("fedder", ctx.format, &header, &rows)?;
    let pure: Vec<String> = rows.iter().filter(|r| r[1] == "true").map(|r| r[0].clone()).collect();
    ctx.summary.push(format!("F-pure for p in {{{}}} of {} primes tested", pure.join(", "), rows.len()));
    Ok(())
}

fn oracle<F: Field>(ctx: &mut Ctx, spec: &RingSpec<F>, a: &crate::OracleArgs) -> Result<(), CliError> {
    let mut rows = Vec::new();
    let mut mismatches = 0;
    for m in 1..=a.order_max {
        for e in a.degree_min..=a.degree_max {
            let dim = operator_space_dim(spec, m, e);
            let min_cap = gradop::diffop::oracle_min_cap(spec, m, e);
            let cap_max = a.cap_max.unwrap_or(min_cap + 3).max(min_cap);
            let o = stabilized_oracle(spec, m, e, cap_max).map_err(|err| CliError::Input(err.to_string()))?;
            if o.dim < dim {
                return Err(CliError::Internal(format!("m={m} e={e}: oracle bound {} below computed dimension {dim}", o.dim)));
            }
            if o.dim != dim {
                mismatches += 1;
            }
            rows.push(vec![m.to_string(), e.to_string(), dim.to_string(), o.dim.to_string(), o.d_cap.to_string(), (o.dim == dim).to_string()]);
        }
    }
    let header: Vec<String> = ["m", "e", "opspace", "oracle", "d_cap", "agree"].iter().map(|s| s.to_string()).collect();
    ctx.out.write_table("oracle", ctx.format, &header, &rows)?;
    ctx.summary.push(if mismatches == 0 {
        format!("oracle agrees on all {} cells", rows.len())
    } else {
        format!("{mismatches} of {} cells differ (oracle is an upper bound; raise --cap-max)", rows.len())
    });
    Ok(())
}
