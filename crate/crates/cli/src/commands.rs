use anyhow::{bail, Context, Result};
use serde_json::{json, Value};

use ternary_steiner::code::{
    build_quadric_code, build_welch_code, predicted_shortened_welch, predicted_weights_welch,
    printed_min_weight_lambda, sample_positions, shortened_wd_transfer, weight_distribution, LinearCode,
    MAX_EXHAUSTIVE_DIM,
};
use ternary_steiner::design::{
    blocks_disjoint, cyclic_shift, dual_support_design, frobenius_permutation, p_rank, support_design,
    verify_automorphism, verify_t_design, write_block_list, write_certificate_json, DesignVerdict,
};
use ternary_steiner::gf::Field;
use ternary_steiner::oracles;
use ternary_steiner::pg::{ch_rank_formula, compare_ranks, pg_point_line_design, InequivalenceReport};

use crate::{Action, Cli, Command, Emit, Family, Outcome};

pub fn dispatch(cli: &Cli, field: &Field) -> Result<Outcome> {
    match &cli.command {
        Command::Field => Ok(field_info(field)),
        Command::Code { family, emit } => code_cmd(field, *family, *emit),
        Command::Design { family, weight, actions } => design_cmd(field, *family, *weight, actions),
        Command::Pg => pg_cmd(field),
        Command::Compare => compare_cmd(field),
        Command::Lemmas => lemmas_cmd(field),
        Command::Shorten {
            t_size,
            seed,
            samples,
            family,
        } => shorten_cmd(field, *family, *t_size, *seed, *samples),
    }
}

fn outcome(parameters: Value, results: Value, summary: Vec<String>) -> Outcome {
    Outcome {
        parameters,
        results,
        summary,
        artifacts: Vec::new(),
        refutation: None,
    }
}

fn build_code(field: &Field, family: Family) -> Result<LinearCode> {
    Ok(match family {
        Family::Welch => build_welch_code(field)?,
        Family::Quadric => build_quadric_code(field)?,
    })
}

fn family_name(family: Family) -> &'static str {
    match family {
        Family::Welch => "welch",
        Family::Quadric => "quadric",
    }
}

fn field_info(field: &Field) -> Outcome {
    let order = field.order() as u128;
    let results = json!({
        "q": field.q(),
        "m": field.m(),
        "d": field.d(),
        "d0": field.d0(),
        "d_times_d0_mod_order": (field.d() as u128 * field.d0() as u128) % order,
        "coordinates": field.num_coordinates(),
    });
    let summary = vec![
        format!("q = {}, m = {}", field.q(), field.m()),
        format!("d = {}, d0 = {} (d*d0 = -1 mod {})", field.d(), field.d0(), order),
        format!("{} coordinates alpha^(2i)", field.num_coordinates()),
    ];
    outcome(json!({"n": field.n()}), results, summary)
}

fn code_cmd(field: &Field, family: Family, emit: Emit) -> Result<Outcome> {
    let code = build_code(field, family)?;
    let params = json!({"n": field.n(), "family": family, "emit": emit});
    let (len, dim) = (code.length(), code.dimension());
    let mut out = outcome(params, json!({"length": len, "dimension": dim}), vec![format!("{family_name} code: length {len}, dimension {dim}", family_name = family_name(family))]);
    let exhaustive = dim <= MAX_EXHAUSTIVE_DIM;
    match emit {
        Emit::Params | Emit::Wd if !exhaustive => {
            bail!("the weight distribution needs 3^{dim} codewords; exhaustive traversal is limited to dimension {MAX_EXHAUSTIVE_DIM}")
        }
        Emit::Params => {
            let wd = weight_distribution(&code)?;
            let d = wd.min_distance().unwrap_or(0);
            out.results["min_distance"] = json!(d);
            out.summary = vec![format!("{} code: [{len}, {dim}, {d}]", family_name(family))];
        }
        Emit::Wd => {
            let wd = weight_distribution(&code)?;
            out.results["weight_distribution"] = serde_json::to_value(&wd)?;
            out.summary.push(format!("A(z) = {}", wd.enumerator_string()));
            if family == Family::Welch {
                let m = field.m() as u32;
                let closed = predicted_weights_welch(m)?;
                let agrees = closed == wd;
                out.results["matches_closed_form"] = json!(agrees);
                out.summary.push(format!("closed form agrees: {agrees}"));
                if !agrees {
                    out.refutation = Some(format!("computed {} vs closed form {}", wd.enumerator_string(), closed.enumerator_string()));
                }
            }
            out.artifacts.push((format!("wd_{}_n{}.json", family_name(family), field.n()), format!("{}\n", wd.to_json()).into_bytes()));
        }
        Emit::Generator => {
            let mut buf = Vec::new();
            code.write_generator(&mut buf)?;
            let name = format!("generator_{}_n{}.txt", family_name(family), field.n());
            out.results["generator_file"] = json!(name);
            out.summary.push(format!("generator: {name}"));
            out.artifacts.push((name, buf));
        }
    }
    Ok(out)
}

fn certificate_value(verdict: &DesignVerdict) -> Value {
    match verdict {
        DesignVerdict::Design(c) => json!({"t": c.t, "v": c.v, "k": c.k, "lambda": c.lambda, "b": c.b, "counting_identity": c.verified}),
        DesignVerdict::Refuted(r) => json!({"refuted": {"subset": r.subset, "count": r.count, "expected": r.expected}}),
    }
}

fn design_cmd(field: &Field, family: Family, weight: usize, actions: &[Action]) -> Result<Outcome> {
    let code = build_code(field, family)?;
    let side = if weight == 4 { "dual" } else { "primal" };
    let design = if weight == 4 {
        dual_support_design(&code, 4)?
    } else {
        support_design(&code, weight)?
    };
    let params = json!({"n": field.n(), "family": family, "weight": weight, "side": side, "actions": actions});
    let histogram: Value = design
        .multiplicity_histogram()
        .iter()
        .map(|(m, c)| (m.to_string(), json!(c)))
        .collect::<serde_json::Map<_, _>>()
        .into();
    let mut out = outcome(
        params,
        json!({"v": design.v(), "b": design.b(), "k": design.k(), "simple": design.is_simple(), "multiplicity_histogram": histogram}),
        vec![format!(
            "{} supports of weight {weight} in the {side} of the {} code: v = {}, b = {}, simple = {}",
            if design.is_simple() { "distinct" } else { "repeated" },
            family_name(family),
            design.v(),
            design.b(),
            design.is_simple()
        )],
    );
    let stem = format!("{}_{side}_w{weight}_n{}", family_name(family), field.n());

    let mut certificate = None;
    if actions.contains(&Action::Verify) {
        let verdict = verify_t_design(&design, 2)?;
        out.results["certificate"] = certificate_value(&verdict);
        match &verdict {
            DesignVerdict::Design(c) => {
                out.summary.push(format!("2-({}, {}, {}) design, b = {}", c.v, c.k, c.lambda, c.b));
                certificate = Some(*c);
                // minimum weight of the Welch code: compare with the printed λ expression
                let m = field.m();
                if family == Family::Welch && side == "primal" && m >= 2 && weight == 3usize.pow(2 * m as u32) - 3usize.pow(m as u32) {
                    let printed = printed_min_weight_lambda(m as u32)?;
                    let matches = printed.to_string() == c.lambda.to_string();
                    out.results["printed_lambda_expression"] = json!(printed.to_string());
                    out.results["printed_lambda_matches_count"] = json!(matches);
                    if !matches {
                        out.summary.push(format!(
                            "note: the printed expression 3^(n-2)(3^(n-1)-3^m-1)/2 gives {printed}, not the counted {}",
                            c.lambda
                        ));
                    }
                }
            }
            DesignVerdict::Refuted(r) => {
                out.summary.push(format!("not a 2-design: {:?} lies in {} blocks, expected {}", r.subset, r.count, r.expected));
                out.refutation = Some(format!("pair {:?} covered {} times, expected {}", r.subset, r.count, r.expected));
            }
        }
    }
    let mut rank3 = None;
    if actions.contains(&Action::Rank) {
        let r = p_rank(&design, 3)?;
        rank3 = Some(r);
        out.results["rank3"] = json!(r);
        out.summary.push(format!("3-rank {r}"));
    }
    if actions.contains(&Action::Automorphisms) {
        let shift = verify_automorphism(&design, &cyclic_shift(design.v()))?;
        let frob = verify_automorphism(&design, &frobenius_permutation(field))?;
        out.results["automorphisms"] = json!({"cyclic_shift": shift, "frobenius": frob});
        out.summary.push(format!("cyclic shift preserves blocks: {shift}; frobenius: {frob}"));
        if !(shift && frob) && out.refutation.is_none() {
            out.refutation = Some(format!("automorphism check failed (shift {shift}, frobenius {frob})"));
        }
    }
    if actions.contains(&Action::Extract) {
        let mut buf = Vec::new();
        write_block_list(&design, 2, &mut buf)?;
        out.artifacts.push((format!("blocks_{stem}.txt"), buf));
        out.results["block_file"] = json!(format!("blocks_{stem}.txt"));
    }
    if let Some(c) = certificate {
        out.artifacts.push((format!("certificate_{stem}.json"), format!("{}\n", write_certificate_json(&c, rank3)).into_bytes()));
    }
    Ok(out)
}

fn pg_dimension(field: &Field) -> usize {
    field.n() - 1
}

fn pg_cmd(field: &Field) -> Result<Outcome> {
    let dim = pg_dimension(field);
    let pg = pg_point_line_design(dim)?;
    let verdict = verify_t_design(&pg, 2)?;
    let rank = p_rank(&pg, 3)?;
    let formula = ch_rank_formula(field.n(), 3)?;
    let mut out = outcome(
        json!({"n": field.n(), "projective_dimension": dim}),
        json!({"certificate": certificate_value(&verdict), "rank3": rank, "rank_formula": formula.to_string()}),
        vec![
            format!("PG({dim}, 3) points and lines: v = {}, b = {}", pg.v(), pg.b()),
            format!("3-rank {rank}, closed form {formula}"),
        ],
    );
    let steiner = matches!(verdict, DesignVerdict::Design(c) if c.lambda == 1 && c.k == 4);
    if !steiner {
        out.refutation = Some("the lines do not form a 2-(v,4,1) design".into());
    } else if rank.to_string() != formula.to_string() {
        out.refutation = Some(format!("3-rank {rank} differs from the closed form {formula}"));
    }
    let mut buf = Vec::new();
    write_block_list(&pg, 2, &mut buf)?;
    out.artifacts.push((format!("blocks_pg{dim}_3.txt"), buf));
    if let DesignVerdict::Design(c) = verdict {
        out.artifacts.push((format!("certificate_pg{dim}_3.json"), format!("{}\n", write_certificate_json(&c, Some(rank))).into_bytes()));
    }
    Ok(out)
}

fn report_value(r: &InequivalenceReport) -> Value {
    serde_json::to_value(r).expect("reports serialise")
}

fn compare_cmd(field: &Field) -> Result<Outcome> {
    if field.n() < 5 {
        bail!("compare needs n >= 5");
    }
    let welch = dual_support_design(&build_welch_code(field)?, 4)?;
    let quadric = dual_support_design(&build_quadric_code(field)?, 4)?;
    let pg = pg_point_line_design(pg_dimension(field))?;
    let welch_pg = compare_ranks(&welch, &pg).context("welch design vs PG")?;
    let quadric_pg = compare_ranks(&quadric, &pg).context("quadric design vs PG")?;
    let welch_quadric = compare_ranks(&welch, &quadric).context("welch design vs quadric design")?;
    let shared = blocks_disjoint(&welch, &quadric)?;
    let results = json!({
        "welch_vs_pg": report_value(&welch_pg),
        "quadric_vs_pg": report_value(&quadric_pg),
        "welch_vs_quadric": report_value(&welch_quadric),
        "welch_quadric_disjoint": shared.is_none(),
        "shared_block": shared.as_ref().map(|b| b.points().to_vec()),
    });
    let line = |name: &str, r: &InequivalenceReport| format!("{name}: ranks {} vs {} -> {:?}", r.rank_first, r.rank_second, r.verdict);
    let summary = vec![
        line("welch dual design vs PG", &welch_pg),
        line("quadric dual design vs PG", &quadric_pg),
        line("welch vs quadric dual designs", &welch_quadric),
        match &shared {
            None => "welch and quadric dual designs share no block".to_string(),
            Some(b) => format!("welch and quadric dual designs share block {:?}", b.points()),
        },
    ];
    Ok(outcome(json!({"n": field.n()}), results, summary))
}

fn lemmas_cmd(field: &Field) -> Result<Outcome> {
    let reports = oracles::run_all(field)?;
    let failed: Vec<&oracles::LemmaReport> = reports.iter().filter(|r| !r.ok).collect();
    let mut out = outcome(
        json!({"n": field.n()}),
        serde_json::to_value(&reports)?,
        reports.iter().map(|r| r.to_json_line()).collect(),
    );
    if !failed.is_empty() {
        let witnesses: Vec<String> = failed
            .iter()
            .map(|r| format!("{}: {}", r.lemma, r.witness.as_deref().unwrap_or("failed")))
            .collect();
        out.refutation = Some(witnesses.join("; "));
    }
    Ok(out)
}

fn shorten_cmd(field: &Field, family: Family, t: usize, seed: u64, samples: usize) -> Result<Outcome> {
    if !(1..=2).contains(&t) {
        bail!("--t-size must be 1 or 2");
    }
    let code = build_code(field, family)?;
    if code.dimension() > MAX_EXHAUSTIVE_DIM {
        bail!("dimension {} is beyond exhaustive traversal", code.dimension());
    }
    let full = weight_distribution(&code)?;
    let transfer = shortened_wd_transfer(&full, t)?;
    let closed = match family {
        Family::Welch if field.m() >= 2 => Some(predicted_shortened_welch(field.m() as u32, t as u32)?),
        _ => None,
    };
    let mut runs = Vec::new();
    let mut refutation = None;
    let mut summary = Vec::new();
    for positions in sample_positions(code.length(), t, samples, seed) {
        let short = code.shorten(&positions)?;
        let wd = weight_distribution(&short)?;
        let agrees = wd == transfer;
        summary.push(format!(
            "T = {positions:?}: [{}, {}, {}] A(z) = {} (transfer agrees: {agrees})",
            short.length(),
            short.dimension(),
            wd.min_distance().unwrap_or(0),
            wd.enumerator_string()
        ));
        if !agrees && refutation.is_none() {
            refutation = Some(format!("T = {positions:?}: {} vs transfer {}", wd.enumerator_string(), transfer.enumerator_string()));
        }
        runs.push(json!({
            "positions": positions,
            "length": short.length(),
            "dimension": short.dimension(),
            "weight_distribution": serde_json::to_value(&wd)?,
            "matches_transfer": agrees,
        }));
    }
    if let Some(c) = &closed {
        let agrees = *c == transfer;
        summary.push(format!("transfer equals closed form: {agrees}"));
        if !agrees && refutation.is_none() {
            refutation = Some(format!("transfer {} vs closed form {}", transfer.enumerator_string(), c.enumerator_string()));
        }
    }
    let results = json!({
        "transfer": serde_json::to_value(&transfer)?,
        "closed_form_matches": closed.as_ref().map(|c| *c == transfer),
        "samples": runs,
    });
    let mut out = outcome(json!({"n": field.n(), "family": family, "t_size": t, "seed": seed, "samples": samples}), results, summary);
    out.refutation = refutation;
    Ok(out)
}
