use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

use wnk_spectra::analysis::{
    enumerate_cubic_bipartite_14, esd, esd_convergence, exception_count_pnk, proof_machinery_check,
    scan_catalog, scan_subcubic_bipartite, verify_grid, AnalysisConfig, ExceptionReport,
    MassDeviation, ProofReport, ScanParams, ScanReport, VerificationReport, GRAM_TOL,
};
use wnk_spectra::closed_form::{closed_form_spectrum, zk_limit_measure, ClosedFormSpectrum};
use wnk_spectra::graph::{
    build_cycle, build_heawood, build_pnk_with_cap, build_wnk_with_cap, load_graph, Family, Graph,
    GraphFile,
};
use wnk_spectra::spectral::{
    graph_spectrum, interlacing_check, median_eigenvalues, multiset_distance, InterlacingReport,
    SpectrumReport,
};

use crate::args::{
    EsdOpts, FamilyArg, FamilyOpts, Format, GlobalOpts, Method, ScanOpts, SpectrumOpts, VerifyOpts,
};
use crate::{Status, UsageError};

pub const OUT_DIR_ENV: &str = "WNK_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "wnk-out";

pub struct Ctx<'a> {
    pub global: &'a GlobalOpts,
    pub cfg: AnalysisConfig,
}

impl Ctx<'_> {
    fn out_dir(&self) -> PathBuf {
        self.global
            .out
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn range(name: &str, (lo, hi): (usize, usize)) -> Result<Vec<usize>> {
    if lo > hi {
        return Err(usage(format!(
            "{name} range {lo}:{hi} is empty (need lo <= hi)"
        )));
    }
    Ok((lo..=hi).collect())
}

fn require(value: Option<usize>, flag: &str, family: &str) -> Result<usize> {
    value.ok_or_else(|| usage(format!("--{flag} is required for family {family}")))
}

fn build_family(opts: &FamilyOpts, cap: usize) -> Result<Graph> {
    let family = opts
        .family
        .ok_or_else(|| usage("--family is required (or --in for spectrum)"))?;
    let g = match family {
        FamilyArg::Wnk => build_wnk_with_cap(
            require(opts.n, "n", "wnk")?,
            require(opts.k, "k", "wnk")?,
            cap,
        )?,
        FamilyArg::Pnk => build_pnk_with_cap(
            require(opts.n, "n", "pnk")?,
            require(opts.k, "k", "pnk")?,
            cap,
        )?,
        FamilyArg::Heawood => build_heawood(),
        FamilyArg::Cycle => build_cycle(require(opts.n, "n", "cycle")?)?,
    };
    if g.order() > cap {
        return Err(wnk_spectra::Error::SizeCap {
            order: g.order(),
            cap,
        }
        .into());
    }
    Ok(g)
}

fn file_stem(family: Family) -> String {
    match family {
        Family::Wnk { n, k } => format!("wnk-n{n}-k{k}"),
        Family::Pnk { n, k } => format!("pnk-n{n}-k{k}"),
        Family::Cycle { n } => format!("cycle-n{n}"),
        other => other.name().to_string(),
    }
}

pub fn generate(ctx: &Ctx, opts: &FamilyOpts) -> Result<Status> {
    let g = build_family(opts, ctx.global.cap)?;
    let path = ctx.global.out.clone().unwrap_or_else(|| {
        ctx.out_dir()
            .join(format!("{}.json", file_stem(g.family())))
    });
    write_file(&path, &GraphFile::from(&g).to_json())?;

    println!("wrote {}", path.display());
    println!("family: {}", g.family());
    println!("order: {}", g.order());
    println!("edges: {}", g.edge_count());
    let profile: Vec<String> = g
        .degree_profile()
        .iter()
        .map(|(d, c)| format!("{c} of degree {d}"))
        .collect();
    println!("degrees: {}", profile.join(", "));
    match g.bipartition() {
        Some(colour) => {
            let a = colour.iter().filter(|&&c| !c).count();
            println!("bipartite: yes, classes {a} + {}", g.order() - a);
        }
        None => println!("bipartite: no"),
    }
    Ok(Status::Pass)
}

#[derive(Serialize)]
struct BothSpectra<'a> {
    numeric: &'a SpectrumReport,
    closed_form: &'a ClosedFormSpectrum,
    multiset_distance: f64,
}

fn closed_form_for(g: &Graph) -> Result<ClosedFormSpectrum> {
    match g.family() {
        Family::Wnk { n, k } => Ok(closed_form_spectrum(n, k)?),
        other => Err(wnk_spectra::Error::NotApplicable(format!(
            "closed form applies only to W(n,k) graphs; this graph is family `{}`",
            other.name()
        ))
        .into()),
    }
}

pub fn spectrum(ctx: &Ctx, opts: &SpectrumOpts) -> Result<Status> {
    let g = match &opts.input {
        Some(path) => load_graph(path)?,
        None => build_family(&opts.family, ctx.global.cap)?,
    };
    // Applicability is checked before the solve.
    let closed = match opts.method {
        Method::Numeric => None,
        Method::ClosedForm | Method::Both => Some(closed_form_for(&g)?),
    };
    let numeric = match opts.method {
        Method::ClosedForm => None,
        Method::Numeric | Method::Both => Some(graph_spectrum(&g, &ctx.cfg.solver)?),
    };
    let distance = match (&numeric, &closed) {
        (Some(s), Some(c)) => Some(multiset_distance(s, c)?),
        _ => None,
    };

    let body = match ctx.global.format {
        Format::Json => match (&numeric, &closed) {
            (Some(s), Some(c)) => to_json(&BothSpectra {
                numeric: s,
                closed_form: c,
                multiset_distance: distance.unwrap_or_default(),
            }),
            (Some(s), None) => to_json(s),
            (None, Some(c)) => to_json(c),
            (None, None) => unreachable!(),
        },
        Format::Csv => match (&numeric, &closed) {
            (Some(s), Some(c)) => {
                let mut out = String::from("index,numeric,closed_form\n");
                for (i, (a, b)) in s.values.iter().zip(c.expanded()).enumerate() {
                    out.push_str(&format!("{},{a},{b}\n", i + 1));
                }
                out
            }
            (Some(s), None) => s.to_csv(),
            (None, Some(c)) => {
                let mut out = String::from("value,multiplicity\n");
                for (v, m) in &c.entries {
                    out.push_str(&format!("{v},{m}\n"));
                }
                out
            }
            (None, None) => unreachable!(),
        },
    };

    let mut summary = Vec::new();
    summary.push(format!("graph: {} (order {})", g.family(), g.order()));
    if let Some(s) = &numeric {
        let m = median_eigenvalues(s)?;
        summary.push(format!(
            "median pair: lambda_{} = {:.12}, lambda_{} = {:.12}",
            m.indices.0, m.high, m.indices.1, m.low
        ));
        summary.push(format!("residual bound: {:.3e}", s.residual_bound));
    }
    if let Some(d) = distance {
        summary.push(format!("multiset distance: {d:.3e}"));
    }

    match &ctx.global.out {
        Some(path) => {
            write_file(path, &body)?;
            println!("wrote {}", path.display());
            for line in summary {
                println!("{line}");
            }
        }
        None => {
            print!("{body}");
            for line in summary {
                eprintln!("{line}");
            }
        }
    }
    Ok(Status::Pass)
}

#[derive(Serialize)]
struct ExtendedReport {
    n: usize,
    k: usize,
    pass: bool,
    proof: ProofReport,
    interlacing: InterlacingReport,
    exceptions: ExceptionReport,
}

fn extended_check(n: usize, k: usize, tol: f64, cfg: &AnalysisConfig) -> Result<ExtendedReport> {
    let proof = proof_machinery_check(n, k, tol, GRAM_TOL, cfg)?;
    let w = graph_spectrum(&build_wnk_with_cap(n, k, cfg.solver.cap)?, &cfg.solver)?;
    let p = graph_spectrum(&build_pnk_with_cap(n, k, cfg.solver.cap)?, &cfg.solver)?;
    let interlacing = interlacing_check(&w, &p, k)?;
    let exceptions = exception_count_pnk(n, k, cfg)?;
    Ok(ExtendedReport {
        n,
        k,
        pass: proof.pass && interlacing.pass && exceptions.pass,
        proof,
        interlacing,
        exceptions,
    })
}

pub fn verify(ctx: &Ctx, opts: &VerifyOpts) -> Result<Status> {
    let ns = match (opts.grid_n, opts.n) {
        (Some(r), _) => range("grid-n", r)?,
        (None, Some(n)) => vec![n],
        (None, None) => return Err(usage("--n or --grid-n is required")),
    };
    let ks = match (opts.grid_k, opts.k) {
        (Some(r), _) => range("grid-k", r)?,
        (None, Some(k)) => vec![k],
        (None, None) => return Err(usage("--k or --grid-k is required")),
    };
    if opts.check_tol.is_nan() || opts.check_tol <= 0.0 {
        return Err(usage("check-tol > 0 required"));
    }
    if let Some(&n) = ns.first().filter(|&&n| n < 2) {
        return Err(
            wnk_spectra::Error::InvalidParameter(format!("n >= 2 required, got {n}")).into(),
        );
    }
    if let Some(&k) = ks.first().filter(|&&k| k < 2) {
        return Err(
            wnk_spectra::Error::InvalidParameter(format!("k >= 2 required, got {k}")).into(),
        );
    }
    let (max_n, max_k) = (ns[ns.len() - 1], ks[ks.len() - 1]);
    if 2 * max_n * max_k > ctx.global.cap {
        return Err(wnk_spectra::Error::SizeCap {
            order: 2 * max_n * max_k,
            cap: ctx.global.cap,
        }
        .into());
    }

    let reports: Vec<VerificationReport> = verify_grid(&ns, &ks, opts.check_tol, &ctx.cfg)?;
    let dir = ctx.out_dir().join("verify");
    for r in &reports {
        write_file(
            &dir.join(format!("verify-n{}-k{}.json", r.n, r.k)),
            &to_json(r),
        )?;
    }

    let extended = if opts.extended {
        let points: Vec<(usize, usize)> = reports.iter().map(|r| (r.n, r.k)).collect();
        let ext = wnk_spectra::exec::try_map_slice(&points, ctx.cfg.exec, |&(n, k)| {
            extended_check(n, k, opts.check_tol, &ctx.cfg)
        })?;
        for e in &ext {
            write_file(
                &dir.join(format!("extended-n{}-k{}.json", e.n, e.k)),
                &to_json(e),
            )?;
        }
        Some(ext)
    } else {
        None
    };

    let failed: Vec<&VerificationReport> = reports.iter().filter(|r| !r.pass).collect();
    let ext_failed = extended
        .as_ref()
        .map_or(0, |e| e.iter().filter(|e| !e.pass).count());

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    if reports.len() == 1 && failed.is_empty() {
        let r = &reports[0];
        writeln!(
            out,
            "W({},{}) order {}: pass (distance {:.3e}, median {:.12} / {:.12})",
            r.n, r.k, r.order, r.multiset_distance, r.median_pair.high, r.median_pair.low
        )?;
        for note in &r.notes {
            writeln!(out, "  note: {note}")?;
        }
    } else {
        writeln!(
            out,
            "{} point(s) checked, {} failed",
            reports.len(),
            failed.len()
        )?;
    }
    if !failed.is_empty() {
        writeln!(
            out,
            "{:>4} {:>4} {:>6} {:>11} {:>7} {:>9} {:>5} {:>5}",
            "n", "k", "order", "distance", "median", "intervals", "bands", "gram"
        )?;
        for r in &failed {
            writeln!(
                out,
                "{:>4} {:>4} {:>6} {:>11.3e} {:>7} {:>9} {:>5} {:>5}",
                r.n,
                r.k,
                r.order,
                r.multiset_distance,
                r.median_pass,
                r.interval_checks.iter().all(|c| c.pass),
                r.band_check.pass,
                r.gram.pass
            )?;
        }
    }
    if let Some(ext) = &extended {
        writeln!(
            out,
            "extended checks: {} point(s), {} failed",
            ext.len(),
            ext_failed
        )?;
        for e in ext.iter().filter(|e| !e.pass) {
            writeln!(
                out,
                "  ({},{}): proof {} interlacing {} exceptions {}",
                e.n, e.k, e.proof.pass, e.interlacing.pass, e.exceptions.pass
            )?;
        }
    }
    writeln!(out, "reports in {}", dir.display())?;

    Ok(if failed.is_empty() && ext_failed == 0 {
        Status::Pass
    } else {
        Status::Fail
    })
}

fn print_deviation(n: usize, d: &MassDeviation) {
    println!(
        "{n:>6} {:>10.6} {:>10.6} {:>10.6} {:>10.6}",
        d.atom_plus1, d.atom_minus1, d.band_pos, d.band_neg
    );
}

pub fn esd_cmd(ctx: &Ctx, opts: &EsdOpts) -> Result<Status> {
    let limit = zk_limit_measure(opts.k)?;
    if opts.bins == 0 {
        return Err(wnk_spectra::Error::InvalidParameter("bins >= 1 required".into()).into());
    }
    let ns: Vec<usize> = match (&opts.n_list, opts.n) {
        (Some(list), _) => list.clone(),
        (None, Some(n)) => vec![n],
        (None, None) => return Err(usage("--n or --n-list is required")),
    };
    if let Some(&n) = ns.iter().find(|&&n| n < 2) {
        return Err(
            wnk_spectra::Error::InvalidParameter(format!("n >= 2 required, got {n}")).into(),
        );
    }
    let dir = ctx.out_dir().join("esd");
    let k = opts.k;

    println!(
        "limit measure for k = {k}: atoms +-1 mass {:.6}, bands mass {:.6}",
        limit.atom_mass(1.0),
        limit.bands[0].2
    );
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>10}",
        "n", "dev(+1)", "dev(-1)", "dev(band+)", "dev(band-)"
    );

    if opts.n_list.is_none() {
        let r = esd(ns[0], k, opts.bins, &ctx.cfg)?;
        write_file(&dir.join(format!("esd-n{}-k{k}.json", r.n)), &to_json(&r))?;
        write_file(
            &dir.join(format!("esd-n{}-k{k}.csv", r.n)),
            &r.histogram_csv(),
        )?;
        print_deviation(r.n, &MassDeviation::between(&r.masses(), &limit));
        println!(
            "masses: +1 {:.6}, -1 {:.6}, band+ {:.6}, band- {:.6}, outside {} ({:.6})",
            r.atom_mass_plus1,
            r.atom_mass_minus1,
            r.band_mass_pos,
            r.band_mass_neg,
            r.out_of_support_count,
            r.out_of_support_mass
        );
        println!("reports in {}", dir.display());
        return Ok(Status::Pass);
    }

    let table = esd_convergence(k, &ns, opts.bins, &ctx.cfg)?;
    let list: Vec<String> = ns.iter().map(ToString::to_string).collect();
    write_file(
        &dir.join(format!("esd-convergence-k{k}-n{}.json", list.join("_"))),
        &to_json(&table),
    )?;
    for row in &table.rows {
        write_file(
            &dir.join(format!("esd-n{}-k{k}.csv", row.n)),
            &row.report.histogram_csv(),
        )?;
        print_deviation(row.n, &row.deviation);
    }
    println!(
        "deviations {}",
        if table.monotone {
            "decrease (within 2/n slack)"
        } else {
            "do NOT decrease"
        }
    );
    println!("reports in {}", dir.display());
    Ok(if table.monotone {
        Status::Pass
    } else {
        Status::Fail
    })
}

fn safe_name(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '-'
            }
        })
        .collect()
}

pub fn run_dir_name(seed: u64, opts: &ScanOpts) -> String {
    if opts.catalog_only {
        format!("scan-seed{seed}-catalog")
    } else {
        let (lo, hi) = opts.orders;
        let tag = if opts.no_catalog { "-nocat" } else { "" };
        format!("scan-seed{seed}-o{lo}-{hi}-s{}{tag}", opts.samples)
    }
}

pub fn scan(ctx: &Ctx, opts: &ScanOpts) -> Result<Status> {
    let seed = ctx.global.seed;
    let mut report: ScanReport = if opts.catalog_only {
        scan_catalog(seed, &ctx.cfg)?
    } else {
        let (lo, hi) = opts.orders;
        if lo > hi {
            return Err(wnk_spectra::Error::InvalidParameter(format!(
                "order range {lo}:{hi} is empty (need min <= max)"
            ))
            .into());
        }
        let params = ScanParams {
            order_min: lo,
            order_max: hi,
            samples_per_order: opts.samples,
            seed,
            include_catalog: !opts.no_catalog,
        };
        scan_subcubic_bipartite(&params, &ctx.cfg)?
    };
    if opts.enumerate_cubic14 {
        report.enumeration = Some(enumerate_cubic_bipartite_14(
            ctx.cfg.solver.tol,
            ctx.cfg.exec,
        ));
    }

    let dir = ctx.out_dir().join(run_dir_name(seed, opts));
    write_file(&dir.join("report.json"), &to_json(&report))?;
    for e in &report.exceptions {
        write_file(
            &dir.join("exceptions")
                .join(format!("{}.json", safe_name(&e.id))),
            &e.graph.to_json(),
        )?;
    }
    if let Some(en) = &report.enumeration {
        for (i, g) in en.non_heawood.iter().enumerate() {
            write_file(
                &dir.join("exceptions").join(format!("cubic14-{i}.json")),
                &g.to_json(),
            )?;
        }
    }

    let non_heawood = report.non_heawood_exceptions().count()
        + report
            .enumeration
            .as_ref()
            .map_or(0, |e| e.non_heawood.len());
    println!("graphs examined: {}", report.graphs_examined);
    println!(
        "median exceptions: {} ({} Heawood, {} other)",
        report.exceptions.len(),
        report.heawood_hits,
        report.non_heawood_exceptions().count()
    );
    for e in &report.exceptions {
        println!(
            "  {}: median pair {:.12} / {:.12}{}",
            e.id,
            e.median_pair.high,
            e.median_pair.low,
            if e.heawood { " (Heawood)" } else { "" }
        );
    }
    println!(
        "delta_min: {:.6} (empirical, over this sample)",
        report.delta_min
    );
    if let Some(en) = &report.enumeration {
        println!(
            "cubic 14-vertex enumeration: {} representatives, {} connected, {} exceptions ({} Heawood)",
            en.representatives, en.connected, en.exceptions, en.heawood_exceptions
        );
    }
    println!("report in {}", dir.display());
    if report.failure_rate() > 0.5 {
        eprintln!(
            "warning: {:.0}% of generation attempts failed ({} of {})",
            100.0 * report.failure_rate(),
            report.generation_failures,
            report.generation_attempts
        );
    }
    Ok(if non_heawood == 0 {
        Status::Pass
    } else {
        Status::Fail
    })
}
