use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use freewill_core::coloring::{
    ColoringError, Verdict, export_cnf, search_101, validate_101, verify_lemma_trace,
};
use freewill_core::exactgeom::{
    ExtendedConfig, automorphisms, build_peres33, extended_configuration, graph_to_dot,
    graph_to_json, rayset_from_json,
};
use freewill_core::janus::{
    ChoiceSource, FrameOrder, HexWorld, Move, SessionPlan, left_right_face_test, load_plans,
    no_signalling_check, possible_outcomes, run_session,
};
use freewill_core::quantum::{NoiseModel, monte_carlo_spin, monte_carlo_twin_at, threshold_bound};
use freewill_core::rng::{derive_seed, stream};
use freewill_core::{OrthGraph, RaySet};
use rand::Rng;
use serde_json::{Value, json};

use crate::report::{CliError, RunConfig};
use crate::{Angle, Cmd, ExportWhat, Format, Output, Sim};

pub(crate) fn dispatch(cmd: &Cmd) -> Result<(RunConfig, Output), CliError> {
    match cmd {
        Cmd::Peres { format } => peres(*format),
        Cmd::Lemma { config, format } => lemma(config.as_deref(), *format),
        Cmd::Bounds { delta, format } => bounds(delta, *format),
        Cmd::Simulate { kind } => match kind {
            Sim::Twin {
                n,
                seed,
                plans,
                transcripts,
            } => simulate_twin(*n, *seed, plans.as_deref(), transcripts.as_deref()),
            Sim::Hex { n, seed } => simulate_hex(*n, *seed),
            Sim::Montecarlo {
                n,
                seed,
                delta,
                phi,
            } => simulate_montecarlo(*n, *seed, delta, phi),
        },
        Cmd::Export {
            what,
            config,
            format,
        } => export(*what, config.as_deref(), *format),
    }
}

fn only(format: Format, allowed: &[Format], command: &str) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{command} does not support --format {}",
            format.name()
        )))
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_rays(config: Option<&Path>) -> Result<RaySet, CliError> {
    match config {
        None => Ok(build_peres33()),
        Some(path) => {
            let text = read_file(path)?;
            let label = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("config");
            rayset_from_json(label, &text)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        }
    }
}

fn census(g: &OrthGraph) -> Value {
    json!({
        "rays": g.node_count(),
        "triples": g.triples().len(),
        "lone_pairs": g.lone_pairs().len(),
        "edges": g.edges().len(),
    })
}

fn peres(format: Format) -> Result<(RunConfig, Output), CliError> {
    let cfg = RunConfig::new("peres", format.name());
    let s: RaySet = build_peres33();
    let g = OrthGraph::from_rays(&s);
    let name = format!("peres.{}", format.extension());
    let mut out = Output {
        body: None,
        results: None,
        default_name: name,
        exit: 0,
    };
    match format {
        Format::Json => {
            let rays: Vec<_> = s.rays().iter().map(|r| r.to_pairs_i64()).collect();
            out.results = Some(json!({
                "label": s.label(),
                "rays": rays,
                "census": census(&g),
            }));
        }
        Format::Text => {
            let mut t = String::new();
            for (i, r) in s.rays().iter().enumerate() {
                let _ = writeln!(t, "{i:>2}  {r}");
            }
            let _ = writeln!(
                t,
                "{} rays, {} orthogonal triples, {} lone pairs, {} edges",
                g.node_count(),
                g.triples().len(),
                g.lone_pairs().len(),
                g.edges().len()
            );
            out.body = Some(t);
        }
        Format::Dot => {
            let mut t = format!(
                "// {} rays, {} triples, {} lone pairs (dashed), {} edges\n",
                g.node_count(),
                g.triples().len(),
                g.lone_pairs().len(),
                g.edges().len()
            );
            t.push_str(&graph_to_dot(&s, &g));
            out.body = Some(t);
        }
        Format::Dimacs => {
            let labels = s.rays().iter().map(|r| r.to_string()).collect();
            out.body = Some(export_cnf(&g).with_labels(labels).to_dimacs());
        }
    }
    Ok((cfg, out))
}

fn lemma(config: Option<&Path>, format: Format) -> Result<(RunConfig, Output), CliError> {
    only(format, &[Format::Json, Format::Text], "lemma")?;
    let mut cfg = RunConfig::new("lemma", format.name());
    cfg.input = config.map(|p| p.display().to_string());
    let s = load_rays(config)?;
    let g = OrthGraph::from_rays(&s);
    let aut = automorphisms(&s, &g);
    let res = search_101(&g, Some(&aut));

    match res.verdict {
        Verdict::Sat => {
            let w = res
                .witness
                .as_ref()
                .ok_or_else(|| CliError::Inconsistent("SAT without witness".into()))?;
            validate_101(&g, w)
                .map_err(|c| CliError::Inconsistent(format!("witness fails at {c:?}")))?;
        }
        Verdict::Unsat => {
            let rf = res
                .refutation
                .as_ref()
                .ok_or_else(|| CliError::Inconsistent("UNSAT without refutation".into()))?;
            rf.replay(&g)
                .map_err(|e| CliError::Inconsistent(format!("refutation does not replay: {e}")))?;
        }
    }

    let trace = verify_lemma_trace(&g);
    let (trace_status, trace_report) = match &trace {
        Ok(rep) if rep.is_complete() => ("verified", Some(rep)),
        Ok(rep) => ("incomplete", Some(rep)),
        Err(ColoringError::SkeletonNotFound) => ("not-found", None),
        Err(e @ ColoringError::ReplayMismatch(_)) => {
            return Err(CliError::Inconsistent(e.to_string()));
        }
    };
    let exit = match (res.verdict, trace_status) {
        (Verdict::Unsat, "verified" | "not-found") => 0,
        (Verdict::Sat, "incomplete" | "not-found") => 1,
        (v, t) => {
            return Err(CliError::Inconsistent(format!(
                "search says {v:?} but the hand-proof trace is {t}"
            )));
        }
    };

    let mut out = Output {
        body: None,
        results: None,
        default_name: format!("lemma.{}", format.extension()),
        exit,
    };
    if format == Format::Text {
        let mut t = String::new();
        let _ = writeln!(t, "configuration: {} ({} rays)", s.label(), s.len());
        let _ = writeln!(t, "verdict: {}", verdict_name(res.verdict));
        let _ = writeln!(
            t,
            "search: {} branches, {} propagations, depth {}, {} automorphisms",
            res.stats.branches,
            res.stats.propagations,
            res.stats.max_depth,
            aut.len()
        );
        if let Some(rf) = &res.refutation {
            let _ = writeln!(t, "refutation: {} leaves, replay verified", rf.leaves());
        }
        if let Some(w) = &res.witness {
            let _ = writeln!(
                t,
                "witness: {}",
                w.iter().map(|b| b.to_string()).collect::<String>()
            );
        }
        let _ = writeln!(t, "hand-proof trace: {trace_status}");
        if let Some(rep) = trace_report {
            t.push_str(&rep.to_text(Some(&s)));
        }
        out.body = Some(t);
    } else {
        out.results = Some(json!({
            "label": s.label(),
            "rays": s.len(),
            "census": census(&g),
            "verdict": res.verdict,
            "stats": res.stats,
            "automorphisms": aut.len(),
            "refutation_leaves": res.refutation.as_ref().map(|r| r.leaves()),
            "refutation": res.refutation,
            "witness": res.witness,
            "trace_status": trace_status,
            "trace": trace_report,
        }));
    }
    Ok((cfg, out))
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Sat => "SAT",
        Verdict::Unsat => "UNSAT",
    }
}

fn bounds(delta: &Angle, format: Format) -> Result<(RunConfig, Output), CliError> {
    only(format, &[Format::Json, Format::Text], "bounds")?;
    let mut cfg = RunConfig::new("bounds", format.name());
    cfg.delta = Some(delta.text.clone());
    let b = threshold_bound(delta.radians).map_err(|e| CliError::Usage(e.to_string()))?;
    let margin = b.threshold - b.combined;
    let verdict = if b.below_threshold {
        format!("functional hypothesis contradicted by margin {margin:.6e}")
    } else {
        format!(
            "no contradiction: combined bound {:.6e} reaches the threshold",
            b.combined
        )
    };
    let exit = if b.below_threshold { 0 } else { 1 };
    let mut out = Output {
        body: None,
        results: None,
        default_name: format!("bounds.{}", format.extension()),
        exit,
    };
    if format == Format::Text {
        out.body = Some(format!(
            "delta: {} = {:.12e} rad\neps_s <= {:.12e}\neps_t <= {:.12e}\n3 eps_t + eps_s <= {:.12e}\nthreshold: {:.12e}\n{verdict}\n",
            delta.text, delta.radians, b.eps_s_bound, b.eps_t_bound, b.combined, b.threshold
        ));
    } else {
        out.results = Some(json!({
            "delta": delta.text,
            "delta_rad": delta.radians,
            "eps_s_bound": b.eps_s_bound,
            "eps_t_bound": b.eps_t_bound,
            "combined": b.combined,
            "threshold": b.threshold,
            "below_threshold": b.below_threshold,
            "margin": margin,
            "verdict": verdict,
        }));
    }
    Ok((cfg, out))
}

fn random_plan(e: &ExtendedConfig, rng: &mut impl Rng) -> SessionPlan {
    let mut t = e.triples[rng.random_range(0..e.triples.len())];
    t.rotate_left(rng.random_range(0..3));
    if rng.random_bool(0.5) {
        t.swap(1, 2);
    }
    let b = if rng.random_bool(0.5) {
        t[rng.random_range(0..3)]
    } else {
        rng.random_range(0..e.rays.len())
    };
    let order = if rng.random_bool(0.5) {
        FrameOrder::AFirst
    } else {
        FrameOrder::BFirst
    };
    let rays = e.rays.rays();
    SessionPlan::new(t.map(|i| rays[i].clone()), rays[b].clone(), order)
        .expect("configuration triples")
}

fn simulate_twin(
    n: u64,
    seed: u64,
    plans: Option<&Path>,
    transcripts: Option<&Path>,
) -> Result<(RunConfig, Output), CliError> {
    let mut cfg = RunConfig::new("simulate", "json");
    cfg.kind = Some("twin".into());
    cfg.seed = Some(seed);
    cfg.trials = Some(n);
    cfg.input = plans.map(|p| p.display().to_string());

    let e = extended_configuration(&build_peres33::<i64>());
    let batch = match plans {
        Some(p) => {
            let list = load_plans(&read_file(p)?)
                .map_err(|err| CliError::Usage(format!("{}: {err}", p.display())))?;
            if list.is_empty() {
                return Err(CliError::Usage(format!("{}: no plans", p.display())));
            }
            Some(list)
        }
        None => None,
    };
    let mut sink = match transcripts {
        Some(p) => Some((
            p,
            std::io::BufWriter::new(fs::File::create(p).map_err(|err| CliError::io(p, err))?),
        )),
        None => None,
    };

    let mut rng = stream(seed, 0);
    let mut src = ChoiceSource::seeded(derive_seed(seed, 1));
    let (mut spin_bad, mut twin_bad, mut replay_bad, mut free, mut forced) =
        (0u64, 0u64, 0u64, 0u64, 0u64);
    for i in 0..n {
        let plan = match &batch {
            Some(list) => list[(i % list.len() as u64) as usize].clone(),
            None => random_plan(&e, &mut rng),
        };
        let t =
            run_session(&plan, &mut src).map_err(|err| CliError::Inconsistent(err.to_string()))?;
        spin_bad += !t.satisfies_spin() as u64;
        twin_bad += !t.satisfies_twin() as u64;
        let again = run_session(&plan, &mut ChoiceSource::scripted(t.free_bits.clone()));
        replay_bad += (again.as_ref() != Ok(&t)) as u64;
        free += t.free_bits.len() as u64;
        forced += (t.events.len() - t.free_bits.len()) as u64;
        if let Some((path, w)) = sink.as_mut() {
            for ev in &t.events {
                let mut v = serde_json::to_value(ev).expect("event serializes");
                v["session"] = json!(i);
                writeln!(w, "{v}").map_err(|err| CliError::io(path, err))?;
            }
        }
    }
    if let Some((path, mut w)) = sink {
        w.flush().map_err(|err| CliError::io(path, err))?;
    }

    // frame-order invariance over every triple, ordering and B direction
    let rays = e.rays.rays();
    let mut frame_checked = 0u64;
    let mut frame_bad = 0u64;
    for t in &e.triples {
        for perm in [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ] {
            let a = perm.map(|i| rays[t[i]].clone());
            for w in rays {
                let plan =
                    SessionPlan::new(a.clone(), w.clone(), FrameOrder::AFirst).expect("triple");
                frame_checked += 1;
                frame_bad += (possible_outcomes(&plan)
                    != possible_outcomes(&plan.with_order(FrameOrder::BFirst)))
                    as u64;
            }
        }
    }

    // no-signalling: for each B direction, all 40 triples with a shared
    // direction measured first by A
    let mut families = 0u64;
    let mut families_bad = 0u64;
    let mut max_tv = 0.0f64;
    for order in [FrameOrder::AFirst, FrameOrder::BFirst] {
        for w in 0..rays.len() {
            let fam: Vec<SessionPlan> = e
                .triples
                .iter()
                .map(|t| {
                    let mut t = *t;
                    if let Some(p) = t.iter().position(|&i| i == w) {
                        t.swap(0, p);
                    }
                    SessionPlan::new(t.map(|i| rays[i].clone()), rays[w].clone(), order)
                        .expect("triple")
                })
                .collect();
            let r =
                no_signalling_check(&fam).map_err(|err| CliError::Inconsistent(err.to_string()))?;
            families += 1;
            families_bad += !r.passes as u64;
            max_tv = max_tv.max(r.max_tv);
        }
    }

    let violations = spin_bad + twin_bad + replay_bad + frame_bad + families_bad;
    let results = json!({
        "sessions": n,
        "plans": if batch.is_some() { "file" } else { "random" },
        "spin_violations": spin_bad,
        "twin_violations": twin_bad,
        "replay_mismatches": replay_bad,
        "free_bits": free,
        "forced_bits": forced,
        "frame_order": { "plans_checked": frame_checked, "mismatches": frame_bad },
        "no_signalling": { "families": families, "failing": families_bad, "max_tv": max_tv },
    });
    Ok((
        cfg,
        Output {
            body: None,
            results: Some(results),
            default_name: "simulate-twin.json".into(),
            exit: if violations == 0 { 0 } else { 2 },
        },
    ))
}

fn simulate_hex(n: u64, seed: u64) -> Result<(RunConfig, Output), CliError> {
    let mut cfg = RunConfig::new("simulate", "json");
    cfg.kind = Some("hex".into());
    cfg.seed = Some(seed);
    cfg.trials = Some(n);
    let r = left_right_face_test(n as usize, seed)
        .map_err(|e| CliError::Inconsistent(e.to_string()))?;

    let mut probe = HexWorld::new(ChoiceSource::seeded(seed));
    probe.step([Move::UpperLeft, Move::UpperRight]);
    let pre_day_rejected = probe.read(probe.day() + 1, 0).is_err();

    let violations = r.left.parity_violations + r.right.parity_violations;
    let results = json!({
        "faces": r,
        "pre_day_read_rejected": pre_day_rejected,
    });
    Ok((
        cfg,
        Output {
            body: None,
            results: Some(results),
            default_name: "simulate-hex.json".into(),
            exit: if violations == 0 && pre_day_rejected {
                0
            } else {
                2
            },
        },
    ))
}

fn simulate_montecarlo(
    n: u64,
    seed: u64,
    delta: &Angle,
    phis: &[Angle],
) -> Result<(RunConfig, Output), CliError> {
    if n == 0 {
        return Err(CliError::Usage("-n must be at least 1".into()));
    }
    let mut cfg = RunConfig::new("simulate", "json");
    cfg.kind = Some("montecarlo".into());
    cfg.seed = Some(seed);
    cfg.trials = Some(n);
    cfg.delta = Some(delta.text.clone());
    cfg.extra = vec![(
        "phi".into(),
        phis.iter()
            .map(|p| p.text.as_str())
            .collect::<Vec<_>>()
            .join(","),
    )];
    let noise = NoiseModel::new(delta.radians, seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let r = monte_carlo_spin(n, noise);
    let twin: Vec<_> = phis
        .iter()
        .enumerate()
        .map(|(i, phi)| monte_carlo_twin_at(phi.radians, n, derive_seed(seed, 1000 + i as u64)))
        .collect();
    let spin_upper = r.intervals.spin_noncanonical[1];
    let spin_ok = spin_upper <= 1.0 / 800.0;
    let rate_in_interval = r.intervals.spin_noncanonical[0] <= r.rates.spin_noncanonical
        && r.rates.spin_noncanonical <= spin_upper;
    let twin_ok = twin.iter().all(|t| t.within_3_sigma);
    let results = json!({
        "delta": r.delta,
        "eps_s_bound": r.eps_s_bound,
        "eps_t_bound": r.eps_t_bound,
        "combined": r.combined,
        "threshold": r.threshold,
        "n_trials": r.n_trials,
        "counts": { "spin_noncanonical": r.noncanonical_count, "twin_mismatch": r.mismatch_count },
        "rates": r.rates,
        "intervals": r.intervals,
        "seed": r.seed,
        "twin_at_phi": twin,
        "checks": {
            "spin_upper_99_le_1_800": spin_ok,
            "rate_within_interval": rate_in_interval,
            "twin_within_3_sigma": twin_ok,
        },
    });
    Ok((
        cfg,
        Output {
            body: None,
            results: Some(results),
            default_name: "simulate-montecarlo.json".into(),
            exit: if spin_ok && twin_ok && rate_in_interval {
                0
            } else {
                1
            },
        },
    ))
}

fn export(
    what: ExportWhat,
    config: Option<&Path>,
    format: Option<Format>,
) -> Result<(RunConfig, Output), CliError> {
    let format = match (what, format) {
        (ExportWhat::Cnf, None | Some(Format::Dimacs)) => Format::Dimacs,
        (ExportWhat::Graph, None) => Format::Dot,
        (ExportWhat::Graph, Some(f @ (Format::Dot | Format::Json))) => f,
        (_, Some(f)) => {
            return Err(CliError::Usage(format!(
                "export does not support --format {}",
                f.name()
            )));
        }
    };
    let mut cfg = RunConfig::new("export", format.name());
    cfg.input = config.map(|p| p.display().to_string());
    let s = load_rays(config)?;
    let g = OrthGraph::from_rays(&s);
    let body = match format {
        Format::Dimacs => {
            let labels = s.rays().iter().map(|r| r.to_string()).collect();
            export_cnf(&g).with_labels(labels).to_dimacs()
        }
        Format::Dot => graph_to_dot(&s, &g),
        _ => {
            let mut t =
                serde_json::to_string_pretty(&graph_to_json(&s, &g)).expect("graph serializes");
            t.push('\n');
            t
        }
    };
    Ok((
        cfg,
        Output {
            body: Some(body),
            results: None,
            default_name: format!("{}.{}", s.label(), format.extension()),
            exit: 0,
        },
    ))
}
