use serde::Deserialize;
use serde_json::{json, Value};
use toric_cover::chow::{self, Divisor, DivisorJson};
use toric_cover::covering::{
    axes_witness, complement_witness, kkm_lebesgue_witness, kkm_witness, lebesgue_witness, palais_coloring,
    validate_coloring, CoverJson, LatticeCover, ModelKind, ModelParams, PointCloudCover, PointCloudJson, Verdict,
    WitnessReport,
};
use toric_cover::harness;
use toric_cover::moment::{moment_map_eval, MomentInput, MomentKind};
use toric_cover::rational::{fmt_q, parse_q};
use toric_cover::SimplePolytope;

use crate::input::{compute_err, input_err, parse, parse_standard, polytope_from, read_source, CliError};
use crate::{PatternArg, Response, TheoremArg};

fn standard(arg: Option<&str>) -> Result<Option<SimplePolytope>, CliError> {
    arg.map(|s| parse_standard(s).map_err(|e| CliError::Input(format!("--standard: {e}"))))
        .transpose()
}

fn qs(v: &[toric_cover::Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn divisor(json: &DivisorJson, p: &SimplePolytope, field: &str) -> Result<Divisor, CliError> {
    Divisor::from_json(json, p.facet_count()).map_err(|e| CliError::Input(format!("at `{field}`: {e}")))
}

fn ok(json: Value, summary: String) -> Result<Response, CliError> {
    Ok(Response { json, summary, code: 0 })
}

pub fn ring(input: Option<&str>, std_arg: Option<&str>) -> Result<Response, CliError> {
    let p = match standard(std_arg)? {
        Some(p) if input.is_none() => p,
        Some(_) => return Err(CliError::Input("give either a polytope input or --standard, not both".into())),
        None => parse::<SimplePolytope>(&read_source(input)?)?,
    };
    let ring = chow::presentation(&p);
    let summary = format!(
        "{} generators, {} linear relations, {} minimal non-faces",
        ring.generators.len(),
        ring.linear_relations.len(),
        ring.minimal_nonfaces.len()
    );
    ok(serde_json::to_value(&ring).expect("serializable"), summary)
}

fn read_doc<T: for<'de> Deserialize<'de>>(input: Option<&str>) -> Result<T, CliError> {
    parse(&read_source(input)?)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IntersectDoc {
    #[serde(default)]
    polytope: Option<SimplePolytope>,
    divisors: Vec<DivisorJson>,
}

pub fn intersect(input: Option<&str>, std_arg: Option<&str>) -> Result<Response, CliError> {
    let doc: IntersectDoc = read_doc(input)?;
    let p = polytope_from(doc.polytope, standard(std_arg)?.as_ref())?;
    let divisors = doc
        .divisors
        .iter()
        .enumerate()
        .map(|(i, d)| divisor(d, &p, &format!("divisors[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let value = chow::intersection_number(&p, &divisors).map_err(|e| match e {
        chow::ChowError::NefLiftFailed => compute_err(e),
        other => input_err(other),
    })?;
    let s = fmt_q(&value);
    ok(json!({ "value": s }), format!("intersection number {s}"))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PrincipalDoc {
    #[serde(default)]
    polytope: Option<SimplePolytope>,
    divisor: DivisorJson,
    /// When present, the question is whether `divisor - other` is principal.
    #[serde(default)]
    other: Option<DivisorJson>,
}

pub fn principal(input: Option<&str>, std_arg: Option<&str>) -> Result<Response, CliError> {
    let doc: PrincipalDoc = read_doc(input)?;
    let p = polytope_from(doc.polytope, standard(std_arg)?.as_ref())?;
    let mut d = divisor(&doc.divisor, &p, "divisor")?;
    if let Some(o) = &doc.other {
        d = d.sub(&divisor(o, &p, "other")?);
    }
    let v = chow::is_principal(&p, &d);
    let summary = match &v {
        Some(v) => format!("principal, v = ({})", qs(v).join(", ")),
        None => "not principal".to_string(),
    };
    ok(json!({ "principal": v.is_some(), "v": v.as_deref().map(qs) }), summary)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AvoidDoc {
    #[serde(default)]
    polytope: Option<SimplePolytope>,
    touched: Vec<usize>,
    /// Defaults to the ample class from the offsets.
    #[serde(default)]
    divisor: Option<DivisorJson>,
}

pub fn avoid(input: Option<&str>, std_arg: Option<&str>) -> Result<Response, CliError> {
    let doc: AvoidDoc = read_doc(input)?;
    let p = polytope_from(doc.polytope, standard(std_arg)?.as_ref())?;
    if let Some(bad) = doc.touched.iter().find(|&&f| f >= p.facet_count()) {
        return Err(CliError::Input(format!("at `touched`: unknown facet {bad}")));
    }
    let h = match &doc.divisor {
        Some(d) => divisor(d, &p, "divisor")?,
        None => chow::ample_from_offsets(&p),
    };
    let touched = doc.touched.iter().copied().collect();
    let cert = chow::avoidance_certificate(&p, &h, &touched);
    let summary = match &cert {
        Some(_) => format!("certificate found for {} touched facets", touched.len()),
        None => "no certificate: the flux system is inconsistent".to_string(),
    };
    ok(
        json!({
            "divisor": h.to_json(),
            "touched": touched,
            "inessential": cert.is_some(),
            "certificate": cert.map(|c| c.to_json()),
        }),
        summary,
    )
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::WitnessFound => 0,
        Verdict::HypothesisViolated => 2,
        Verdict::CounterexampleCandidate => 3,
    }
}

fn report_response(rep: &WitnessReport) -> Result<Response, CliError> {
    let v = rep.verdict();
    let json = serde_json::to_value(rep).expect("serializable");
    let summary = format!("{}: {}", json["theorem"].as_str().unwrap_or("?"), json["verdict"].as_str().unwrap_or("?"));
    Ok(Response { json, summary, code: verdict_code(v) })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SampleDoc {
    #[serde(default)]
    polytope: Option<SimplePolytope>,
    cover: PointCloudJson,
    #[serde(default)]
    eps: Option<String>,
}

pub fn verify(
    input: Option<&str>,
    theorem: TheoremArg,
    k: Option<usize>,
    eps: Option<&str>,
    std_arg: Option<&str>,
) -> Result<Response, CliError> {
    let text = read_source(input)?;
    if let TheoremArg::KkmLebesgue = theorem {
        let doc: SampleDoc = parse(&text)?;
        let p = polytope_from(doc.polytope, standard(std_arg)?.as_ref())?;
        let cover = PointCloudCover::from_json(doc.cover).map_err(|e| CliError::Input(format!("at `cover`: {e}")))?;
        let eps = match eps.map(|e| (e, "--eps")).or(doc.eps.as_deref().map(|e| (e, "eps"))) {
            Some((e, field)) => {
                Some(parse_q(e).ok_or_else(|| CliError::Input(format!("at `{field}`: `{e}` is not a rational p/q")))?)
            }
            None => None,
        };
        let rep = kkm_lebesgue_witness(&p, &cover, eps.as_ref()).map_err(input_err)?;
        return report_response(&rep);
    }
    if std_arg.is_some() || eps.is_some() {
        return Err(CliError::Input("--standard and --eps apply to kkm-lebesgue only".into()));
    }
    let json: CoverJson = parse(&text)?;
    let cover = LatticeCover::from_json(&json).map_err(input_err)?;
    let k = k.unwrap_or_else(|| (cover.multiplicity() as usize).max(1));
    let rep = match theorem {
        TheoremArg::Lebesgue => lebesgue_witness(&cover),
        TheoremArg::Kkm => kkm_witness(&cover, k),
        TheoremArg::Complement => complement_witness(&cover, k),
        TheoremArg::Axes => axes_witness(&cover),
        TheoremArg::KkmLebesgue => unreachable!("handled above"),
    }
    .map_err(input_err)?;
    report_response(&rep)
}

pub fn color(input: Option<&str>) -> Result<Response, CliError> {
    let json: CoverJson = parse(&read_source(input)?)?;
    let cover = LatticeCover::from_json(&json).map_err(input_err)?;
    let coloring = palais_coloring(&cover);
    validate_coloring(&cover, &coloring).map_err(compute_err)?;
    let colors: Vec<Value> = coloring
        .classes
        .iter()
        .map(|class| {
            class
                .iter()
                .map(|piece| {
                    let sets: Vec<&str> = piece.sets.iter().map(|&s| cover.sets[s].name.as_str()).collect();
                    let points: Vec<&[u32]> = piece.points.iter().map(|&p| cover.model.point(p)).collect();
                    json!({ "sets": sets, "points": points })
                })
                .collect()
        })
        .collect();
    let pieces: usize = coloring.classes.iter().map(Vec::len).sum();
    let summary = format!("{} colors, {pieces} pieces", coloring.classes.len());
    ok(json!({ "multiplicity": cover.multiplicity(), "colors": colors }), summary)
}

pub fn generate(
    pattern: PatternArg,
    n: usize,
    r: u32,
    model: ModelKind,
    m: Option<usize>,
    seed: u64,
) -> Result<Response, CliError> {
    let g = match pattern {
        PatternArg::Bricks => harness::shifted_brick_cover(n, r),
        PatternArg::Kkm => harness::kkm_standard_cover(n, r),
        PatternArg::Random => harness::random_low_multiplicity_cover(ModelParams { kind: model, n, r }, m.unwrap_or(n), seed),
    }
    .map_err(input_err)?;
    let summary = format!(
        "{} sets, measured multiplicity {}, seed {}",
        g.cover.sets.len(),
        g.multiplicity,
        g.seed
    );
    ok(serde_json::to_value(g.cover.to_json()).expect("serializable"), summary)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MomentDoc {
    kind: MomentKind,
    input: MomentInput,
}

pub fn moment(input: Option<&str>) -> Result<Response, CliError> {
    let doc: MomentDoc = parse(&read_source(input)?)?;
    let image = moment_map_eval(doc.kind, &doc.input).map_err(|e| CliError::Input(format!("at `input`: {e}")))?;
    let image = qs(&image);
    let summary = format!("image ({})", image.join(", "));
    ok(json!({ "kind": doc.kind, "image": image }), summary)
}

pub fn selftest(seed: u64) -> Result<Response, CliError> {
    let rep = harness::selftest(seed);
    let mut summary = String::new();
    for c in &rep.criteria {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        summary.push_str(&format!("{mark} {:<20} {} [{} ms]\n", c.name, c.detail, c.elapsed_ms));
    }
    let candidates = rep
        .suites
        .iter()
        .any(|s| s.instances.iter().any(|i| i.verdict == Some(Verdict::CounterexampleCandidate)));
    summary.push_str(if rep.passed { "selftest passed" } else { "selftest FAILED" });
    let code = match (rep.passed, candidates) {
        (true, _) => 0,
        (false, true) => 3,
        (false, false) => 1,
    };
    Ok(Response { json: serde_json::to_value(&rep).expect("serializable"), summary, code })
}
