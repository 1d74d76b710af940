use std::io::Read;

use isopower::decide::{
    curve_id, decide_equivalence, describe_image, maximal_scan, EquivalenceVerdict, ImageReport, ScanOptions,
};
use isopower::functor::{hom_point_count, hom_torsion, HomCount, TorsionRealization};
use isopower::kernels::{brute_force_kernels, commutant, is_kernel_subgroup, kernel_subgroups, SubgroupData};
use isopower::modules::{enumerate_modules, ModuleNF};
use isopower::orders::{Form, QuadOrder};
use isopower::zmod::Mat;
use serde::Serialize;
use serde_json::json;

use crate::cli::{Command, CurveArgs, OptionalCurve};
use crate::config::Config;
use crate::error::CliError;
use crate::input::{curve_args, kernel_input};
use crate::output::{joined, opt, Report};

pub fn run(cmd: &Command, cfg: &Config, stdin: &mut impl Read) -> Result<Report, CliError> {
    match cmd {
        Command::ClassifyCurve(c) => classify_curve(c, cfg),
        Command::EnumerateModules { disc, n } => modules(*disc, *n, cfg),
        Command::Decide { curve, image, max_rank } => decide(curve, *image, *max_rank, cfg),
        Command::KernelTest { curve } => {
            let mut text = String::new();
            stdin.read_to_string(&mut text)?;
            kernel_test(&text, curve, cfg)
        }
        Command::MaximalScan { p, minimal, g, sample, seed } => {
            let opts = ScanOptions { minimal: *minimal, max_g: *g, sample: *sample, seed: seed.unwrap_or(cfg.seed) };
            scan(*p, &opts, cfg)
        }
        Command::FunctorEval { curve, conductors, steinitz, disc, degrees, l, e } => {
            functor_eval(curve, conductors, steinitz.as_deref(), *disc, *degrees, l.map(|l| (l, *e)), cfg)
        }
        Command::OracleCompare { curve, l, e, r, s_max } => oracle_compare(curve, *l, *e, *r, *s_max, cfg),
    }
}

const VERDICT_HEADER: [&str; 9] = ["curve", "q", "t", "ss", "f0", "fE", "rank4", "case", "verdict"];

fn verdict_row(v: &EquivalenceVerdict) -> Result<Vec<String>, CliError> {
    let text = |x: serde_json::Value| x.as_str().map(str::to_string).unwrap_or_else(|| x.to_string());
    Ok(vec![
        v.curve.clone(),
        v.q.to_string(),
        v.t.to_string(),
        text(serde_json::to_value(v.ss)?),
        opt(&v.f0),
        opt(&v.f_e),
        v.rank4.to_string(),
        text(serde_json::to_value(v.case)?),
        text(serde_json::to_value(v.verdict)?),
    ])
}

fn classify_curve(c: &CurveArgs, cfg: &Config) -> Result<Report, CliError> {
    let v = decide_equivalence(&*curve_args(c, &cfg.bounds)?)?;
    Ok(Report::single(&v)?.with_table(VERDICT_HEADER.to_vec(), vec![verdict_row(&v)?]))
}

fn modules(disc: i64, n: usize, cfg: &Config) -> Result<Report, CliError> {
    if n == 0 {
        return Err(CliError::Usage("rank must be at least 1".into()));
    }
    let order = QuadOrder::from_disc(disc)?;
    let nfs = enumerate_modules(&order, n, &cfg.bounds)?;
    let lines = nfs.iter().map(serde_json::to_value).collect::<Result<_, _>>()?;
    let rows = nfs
        .iter()
        .map(|nf| {
            let s = nf.steinitz;
            vec![joined(&nf.conductors), s.a.to_string(), s.b.to_string(), s.c.to_string()]
        })
        .collect();
    Ok(Report { lines, table: None }.with_table(vec!["conductors", "a", "b", "c"], rows))
}

#[derive(Serialize)]
struct Decision {
    verdict: EquivalenceVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<ImageReport>,
}

fn decide(c: &CurveArgs, image: bool, max_rank: usize, cfg: &Config) -> Result<Report, CliError> {
    let data = curve_args(c, &cfg.bounds)?;
    let verdict = decide_equivalence(&data)?;
    let image = if image { Some(describe_image(&data, max_rank)?) } else { None };
    let mut header = VERDICT_HEADER.to_vec();
    let mut row = verdict_row(&verdict)?;
    if let Some(img) = &image {
        for r in &img.rows {
            header.extend(["rank", "image", "total"]);
            row.extend([r.rank.to_string(), r.image.to_string(), opt(&r.total)]);
        }
    }
    Ok(Report::single(&Decision { verdict, image })?.with_table(header, vec![row]))
}

fn kernel_test(text: &str, args: &OptionalCurve, cfg: &Config) -> Result<Report, CliError> {
    let (data, g) = kernel_input(text, args, &cfg.bounds)?;
    let c = commutant(&data, g.ell, g.e)?;
    let kernel = is_kernel_subgroup(&c, &g)?;
    let value = json!({
        "curve": curve_id(&data),
        "subgroup": g,
        "frobenius": c.frob,
        "verified": c.verified,
        "kernel": kernel,
    });
    Report::single(&value)
}

fn scan(p: u64, opts: &ScanOptions, cfg: &Config) -> Result<Report, CliError> {
    let mut r = maximal_scan(p, opts, &cfg.bounds)?;
    r.curves.sort_by_key(|a| a.coefficients);
    let mut lines = Vec::new();
    for c in &r.curves {
        let mut v = serde_json::to_value(c)?;
        v["kind"] = json!("curve");
        lines.push(v);
    }
    for x in &r.products {
        let mut v = serde_json::to_value(x)?;
        v["kind"] = json!("product");
        lines.push(v);
    }
    lines.push(json!({
        "kind": "summary",
        "p": r.p,
        "q": r.q,
        "minimal": r.minimal,
        "target": r.target,
        "scanned": r.scanned,
        "extremal": r.curves.len(),
        "classes": r.classes,
        "passed": r.passed,
    }));
    let rows = r
        .curves
        .iter()
        .map(|c| {
            vec![
                joined(&c.coefficients),
                c.j.to_string(),
                c.t.to_string(),
                joined(&c.structure),
                c.torsion.iter().all(|t| t.scalar).to_string(),
            ]
        })
        .collect();
    Ok(Report { lines, table: None }.with_table(vec!["coefficients", "j", "t", "structure", "scalar_frobenius"], rows))
}

#[derive(Serialize)]
struct FunctorReport {
    curve: String,
    base_disc: i64,
    module: ModuleNF,
    counts: Vec<HomCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    torsion: Option<TorsionRealization>,
}

fn functor_eval(
    c: &CurveArgs,
    conductors: &[u64],
    steinitz: Option<&[i64]>,
    disc: Option<i64>,
    degrees: u32,
    level: Option<(u64, u32)>,
    cfg: &Config,
) -> Result<Report, CliError> {
    let data = curve_args(c, &cfg.bounds)?;
    if conductors.is_empty() || conductors.windows(2).any(|w| w[1] == 0 || w[0] % w[1] != 0) {
        return Err(CliError::Usage("conductors must form a chain f_1, …, f_n with f_(i+1) | f_i".into()));
    }
    let base = match disc {
        Some(d) => QuadOrder::from_disc(d)?,
        None => data.end_order()?.with_conductor(conductors[0]),
    };
    let last = base.with_conductor(*conductors.last().expect("nonempty"));
    let steinitz = match steinitz {
        Some([a, b, c]) => Form::new(*a, *b, *c),
        Some(_) => return Err(CliError::Usage("--steinitz takes three integers a,b,c".into())),
        None => Form::principal(last.disc()),
    };
    let nf = ModuleNF { conductors: conductors.to_vec(), steinitz };
    let m = nf.to_module(&base)?;
    let counts = (1..=degrees).map(|d| hom_point_count(&m, &data, d)).collect::<Result<Vec<_>, _>>()?;
    let torsion = level.map(|(l, e)| hom_torsion(&m, &data, l, e)).transpose()?;
    let rows = counts
        .iter()
        .map(|h| {
            vec![
                h.degree.to_string(),
                h.count.to_string(),
                h.predicted.to_string(),
                h.agrees().to_string(),
                h.saturated.to_string(),
            ]
        })
        .collect();
    let report = FunctorReport { curve: curve_id(&data), base_disc: base.disc(), module: nf, counts, torsion };
    Ok(Report::single(&report)?.with_table(vec!["degree", "count", "predicted", "agrees", "saturated"], rows))
}

#[derive(Serialize)]
struct OracleReport {
    curve: String,
    l: u64,
    e: u32,
    r: usize,
    frobenius: Mat,
    verified: bool,
    brute: usize,
    criterion: usize,
    agree: bool,
    only_brute: Vec<SubgroupData>,
    only_criterion: Vec<SubgroupData>,
}

fn oracle_compare(c: &CurveArgs, l: u64, e: u32, r: usize, s_max: usize, cfg: &Config) -> Result<Report, CliError> {
    let data = curve_args(c, &cfg.bounds)?;
    let com = commutant(&data, l, e)?;
    let brute = brute_force_kernels(&com, r, s_max, &cfg.bounds)?;
    let crit = kernel_subgroups(&com, r, &cfg.bounds)?;
    let only_brute: Vec<SubgroupData> = brute.iter().filter(|s| !crit.contains(s)).map(|s| s.to_data()).collect();
    let only_criterion: Vec<SubgroupData> = crit.iter().filter(|s| !brute.contains(s)).map(|s| s.to_data()).collect();
    let report = OracleReport {
        curve: curve_id(&data),
        l,
        e,
        r,
        frobenius: com.frob.clone(),
        verified: com.verified,
        brute: brute.len(),
        criterion: crit.len(),
        agree: only_brute.is_empty() && only_criterion.is_empty(),
        only_brute,
        only_criterion,
    };
    let row = vec![
        report.curve.clone(),
        l.to_string(),
        e.to_string(),
        r.to_string(),
        report.brute.to_string(),
        report.criterion.to_string(),
        report.agree.to_string(),
    ];
    Ok(Report::single(&report)?.with_table(vec!["curve", "l", "e", "r", "brute", "criterion", "agree"], vec![row]))
}
