//! `tripleprod`: runs the identity checks and writes JSON-lines reports with a CSV summary.
//!
//! Exit status is 0 iff every requested check passes, 1 if some check fails
//! and 2 on a usage or computation error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::error::Error;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use tripleprod::maass::{solve, MaassForm, MaassJson, Parity, SolveOptions};
use tripleprod::qexp::{cusp_eigenforms, EigenformJson, HoloEigenform};
use tripleprod::verify::{
    check_eismth_symmetry, check_gross_kudla_arch, check_gross_kudla_central, check_gross_kudla_kk0, check_ikeda_arch,
    check_ikeda_boundary, check_local_zeta_unramified, csv_summary, Constituent, IdentityReport, Session,
    ThirdMomentReport,
};

type Res<T> = Result<T, Box<dyn Error>>;

/// f64 carries about 15 significant digits.
const MAX_DIGITS: u32 = 15;
const DEFAULT_HOLO_COEFFS: usize = 4000;
const DEFAULT_MAASS_COEFFS: usize = 10_000;

#[derive(Parser)]
#[command(name = "tripleprod", version, about = "Numerical checks of level-one triple-product and norm identities")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Working precision in decimal digits (capped at 15).
    #[arg(long, global = true)]
    precision_digits: Option<u32>,
    /// Number of Fourier coefficients per form.
    #[arg(long, global = true)]
    coeff_count: Option<usize>,
    /// Target accuracy passed to quadrature and L-value routines.
    #[arg(long, global = true)]
    eps: Option<f64>,
    /// Worker threads for data-parallel loops.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output prefix: writes PREFIX.jsonl and PREFIX.csv instead of stdout/stderr.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Plain-text key=value file with defaults for the flags above.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Export the Hecke eigenforms of a weight as JSON lines.
    Forms {
        #[arg(long)]
        weight: u32,
    },
    /// Find Maass forms with spectral parameter in [from, to] and export them as JSON lines.
    Maass {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, value_enum, default_value = "even")]
        parity: ParityArg,
    },
    /// Rankin–Selberg norm identity for every eigenform of the given weights.
    Norm {
        #[arg(long, default_values_t = [12u32])]
        weight: Vec<u32>,
        /// Eigenform archive (JSON lines) used instead of computing forms.
        #[arg(long)]
        form_file: Option<PathBuf>,
    },
    /// Eisenstein microlocal-lift identity.
    Eis {
        #[arg(long, default_value_t = 12)]
        weight: u32,
        /// Values of s as `re` or `re,im`; repeatable.
        #[arg(long = "s", default_values = ["2"])]
        s: Vec<String>,
        /// Also run 1 − s and compare the two right-hand sides.
        #[arg(long)]
        symmetric: bool,
        /// Real s > 1 for the coefficient-level unfolding oracle.
        #[arg(long)]
        unfolding: Option<f64>,
    },
    /// Watson's triple-product identity.
    Watson {
        /// Holomorphic weights `k1,k2,k3`; all branch combinations are run.
        #[arg(long, conflicts_with_all = ["maass", "maass_file"])]
        weights: Option<String>,
        /// Interval `a,b`: the first Maass form found there, taken three times.
        #[arg(long)]
        maass: Option<String>,
        #[arg(long, value_enum, default_value = "even")]
        parity: ParityArg,
        /// Maass archive (JSON lines); each form is taken three times.
        #[arg(long)]
        maass_file: Option<PathBuf>,
    },
    /// Unramified local zeta identity for tempered Satake data.
    Localzeta {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        /// Three spectral parameters t_j, giving exponents (it_j, −it_j).
        #[arg(long, num_args = 3, value_delimiter = ',')]
        satake: Option<Vec<f64>>,
        /// Number of random triples over p ∈ {2,3,5}, s ∈ {1,1.25,2}.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Archimedean zeta integrals; without a subcommand runs the standard battery.
    Arch {
        #[command(subcommand)]
        kind: Option<ArchKind>,
    },
    /// Third moments of even Maass forms against λ^{−1/12}.
    Thirdmoment {
        #[arg(long, default_value_t = 13.0)]
        from: f64,
        #[arg(long, default_value_t = 22.0)]
        to: f64,
        #[arg(long)]
        maass_file: Option<PathBuf>,
    },
    /// Recompute verdicts of stored JSON-lines reports and print the CSV summary.
    Report { files: Vec<PathBuf> },
}

#[derive(Subcommand)]
enum ArchKind {
    /// k = 0 Bessel integral against the Γ-product.
    Ikeda {
        #[arg(long)]
        s: f64,
        /// Three parameters as `re` or `re,im`.
        #[arg(long, num_args = 3)]
        sj: Vec<String>,
    },
    /// Holomorphic case, weights with k1 = k2 + k3.
    GrossKudla {
        #[arg(long)]
        weights: String,
        #[arg(long)]
        s: f64,
    },
    /// Mixed (k, k, 0) case at s = 0.
    Kk0 {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s3: String,
    },
    /// The k = 0 boundary comparison.
    Boundary {
        #[arg(long)]
        s: f64,
    },
}

/// Flags merged with the config file.
struct Settings {
    digits: u32,
    coeff_count: Option<usize>,
    eps: f64,
    out: Option<PathBuf>,
}

impl Settings {
    fn holo_coeffs(&self) -> usize {
        self.coeff_count.unwrap_or(DEFAULT_HOLO_COEFFS)
    }

    fn maass_opts(&self) -> SolveOptions {
        SolveOptions { coeff_count: self.coeff_count.unwrap_or(DEFAULT_MAASS_COEFFS), ..Default::default() }
    }
}

fn read_config(path: &Path) -> Res<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, line) in fs::read_to_string(path)?.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("{}:{}: expected key=value", path.display(), i + 1))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

fn settings(g: &Global) -> Res<Settings> {
    let cfg = match &g.config {
        Some(p) => read_config(p)?,
        None => BTreeMap::new(),
    };
    for key in cfg.keys() {
        if !["precision-digits", "coeff-count", "eps", "threads", "out"].contains(&key.as_str()) {
            return Err(format!("unknown config key {key}").into());
        }
    }
    let get = |k: &str| cfg.get(k).map(String::as_str);
    let digits = match g.precision_digits {
        Some(d) => d,
        None => get("precision-digits").map(str::parse).transpose()?.unwrap_or(MAX_DIGITS),
    };
    if digits > MAX_DIGITS {
        eprintln!("warning: --precision-digits {digits} capped at {MAX_DIGITS}");
    }
    let coeff_count = match g.coeff_count {
        Some(c) => Some(c),
        None => get("coeff-count").map(str::parse).transpose()?,
    };
    let eps = match g.eps {
        Some(e) => e,
        None => get("eps").map(str::parse).transpose()?.unwrap_or(1e-10),
    };
    let threads = match g.threads {
        Some(t) => Some(t),
        None => get("threads").map(str::parse).transpose()?,
    };
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let out = g.out.clone().or_else(|| get("out").map(PathBuf::from));
    Ok(Settings { digits: digits.min(MAX_DIGITS), coeff_count, eps, out })
}

/// `re` or `re,im`.
fn parse_complex(s: &str) -> Res<C64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a] => Ok(C64::new(a.parse()?, 0.0)),
        [a, b] => Ok(C64::new(a.parse()?, b.parse()?)),
        _ => Err(format!("cannot read {s:?} as a complex number").into()),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Res<Vec<T>>
where
    T::Err: Error + 'static,
{
    s.split(',').map(|x| x.trim().parse::<T>().map_err(|e| e.into())).collect()
}

fn read_lines<T: serde::de::DeserializeOwned>(path: &Path) -> Res<Vec<T>> {
    let file = BufReader::new(fs::File::open(path)?);
    let mut out = Vec::new();
    for line in file.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

fn load_maass(path: &Path) -> Res<Vec<MaassForm>> {
    read_lines::<MaassJson>(path)?.iter().map(|d| MaassForm::from_json(d).map_err(|e| e.into())).collect()
}

/// JSON lines to PREFIX.jsonl (or stdout) and the CSV summary to PREFIX.csv (or stderr).
fn write_outputs(out: &Option<PathBuf>, lines: &[String], csv: &str) -> Res<()> {
    match out {
        Some(prefix) => {
            let mut j = fs::File::create(prefix.with_extension("jsonl"))?;
            for l in lines {
                writeln!(j, "{l}")?;
            }
            fs::write(prefix.with_extension("csv"), csv)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut h = stdout.lock();
            for l in lines {
                writeln!(h, "{l}")?;
            }
            eprint!("{csv}");
        }
    }
    Ok(())
}

fn emit_reports(st: &Settings, mut reports: Vec<IdentityReport>) -> Res<bool> {
    for r in &mut reports {
        r.inputs.insert("precision_digits".into(), st.digits.to_string());
    }
    let lines: Vec<String> = reports.iter().map(IdentityReport::to_json_line).collect();
    write_outputs(&st.out, &lines, &csv_summary(&reports))?;
    Ok(reports.iter().all(|r| r.pass))
}

fn emit_documents<T: serde::Serialize>(st: &Settings, docs: &[T], summary: String) -> Res<bool> {
    let lines = docs.iter().map(serde_json::to_string).collect::<Result<Vec<_>, _>>()?;
    write_outputs(&st.out, &lines, &summary)?;
    Ok(true)
}

fn eigenforms(k: u32, st: &Settings) -> Res<Vec<HoloEigenform>> {
    Ok(cusp_eigenforms(k, st.holo_coeffs())?)
}

fn arch_battery(st: &Settings) -> Res<Vec<IdentityReport>> {
    let c = C64::new;
    let ikeda = [
        (1.0, [c(0.0, 0.1), c(0.0, 0.2), c(0.0, 0.3)]),
        (1.5, [c(0.0, 0.1), c(0.0, 0.2), c(0.0, 0.3)]),
        (2.0, [c(0.0, 0.5), c(0.0, 1.0), c(0.0, 1.5)]),
        (1.25, [c(0.1, 0.0), c(0.2, 0.0), c(0.15, 0.0)]),
        (1.0, [c(0.0, 0.25), c(0.0, 0.25), c(0.0, 0.0)]),
    ];
    let mut v = Vec::new();
    for (s, sj) in ikeda {
        v.push(check_ikeda_arch(s, sj, st.eps.max(1e-9))?);
    }
    for k in [[12, 8, 4], [28, 16, 12]] {
        for s in [0.0, 1.0] {
            v.push(check_gross_kudla_arch(k, s, 0.0)?);
        }
        v.push(check_gross_kudla_central(k)?);
    }
    v.push(check_gross_kudla_kk0(12, c(0.0, 0.3), st.eps.max(1e-12))?);
    v.push(check_gross_kudla_kk0(20, c(0.0, 2.5), st.eps.max(1e-12))?);
    v.push(check_ikeda_boundary(1.5)?);
    Ok(v)
}

fn run(cli: Cli) -> Res<bool> {
    let st = settings(&cli.global)?;
    let session = Session::new();
    let eps = st.eps;
    match cli.command {
        Command::Forms { weight } => {
            let forms = eigenforms(weight, &st)?;
            let docs: Vec<EigenformJson> = forms.iter().map(HoloEigenform::to_json).collect();
            let summary = forms.iter().map(|f| format!("{} precision {}\n", f.label(), f.precision())).collect();
            emit_documents(&st, &docs, summary)
        }
        Command::Maass { from, to, parity } => {
            let forms = solve(from, to, parity.into(), &st.maass_opts())?;
            let docs: Vec<MaassJson> = forms.iter().map(MaassForm::to_json).collect();
            let summary = forms
                .iter()
                .map(|f| format!("{} certified digits {}\n", f.label(), f.certified_digits))
                .collect();
            emit_documents(&st, &docs, summary)
        }
        Command::Norm { weight, form_file } => {
            let forms = match form_file {
                Some(p) => read_lines::<EigenformJson>(&p)?
                    .iter()
                    .map(|d| HoloEigenform::from_json(d).map_err(|e| e.into()))
                    .collect::<Res<Vec<_>>>()?,
                None => {
                    let mut v = Vec::new();
                    for k in weight {
                        v.extend(eigenforms(k, &st)?);
                    }
                    v
                }
            };
            let reports = forms.iter().map(|f| session.check_ransel(f, eps)).collect::<Result<Vec<_>, _>>()?;
            emit_reports(&st, reports)
        }
        Command::Eis { weight, s, symmetric, unfolding } => {
            let precision = if unfolding.is_some() { st.holo_coeffs().max(100_001) } else { st.holo_coeffs() };
            let f = cusp_eigenforms(weight, precision)?.into_iter().next().ok_or("no cusp form of this weight")?;
            let mut reports = Vec::new();
            for z in s.iter().map(|x| parse_complex(x)).collect::<Res<Vec<_>>>()? {
                let a = session.check_eismth(&f, z, eps)?;
                if symmetric {
                    let b = session.check_eismth(&f, C64::new(1.0, 0.0) - z, eps)?;
                    let sym = check_eismth_symmetry(&a, &b)?;
                    reports.extend([a, b, sym]);
                } else {
                    reports.push(a);
                }
            }
            if let Some(u) = unfolding {
                reports.push(session.check_eismth_unfolding(&f, u)?);
            }
            emit_reports(&st, reports)
        }
        Command::Watson { weights, maass, parity, maass_file } => {
            let mut reports = Vec::new();
            if let Some(w) = weights {
                let k: Vec<u32> = parse_list(&w)?;
                if k.len() != 3 {
                    return Err("--weights needs three values".into());
                }
                let spaces = k.iter().map(|&k| eigenforms(k, &st)).collect::<Res<Vec<_>>>()?;
                for a in &spaces[0] {
                    for b in &spaces[1] {
                        for c in &spaces[2] {
                            let cs = [Constituent::Holomorphic(a), Constituent::Holomorphic(b), Constituent::Holomorphic(c)];
                            reports.push(session.check_watson(cs, eps)?);
                        }
                    }
                }
            } else {
                let forms = match (maass, maass_file) {
                    (_, Some(p)) => load_maass(&p)?,
                    (Some(iv), None) => {
                        let ab: Vec<f64> = parse_list(&iv)?;
                        let [a, b] = ab[..] else { return Err("--maass needs an interval a,b".into()) };
                        solve(a, b, parity.into(), &st.maass_opts())?.into_iter().take(1).collect()
                    }
                    (None, None) => return Err("give --weights, --maass or --maass-file".into()),
                };
                for m in &forms {
                    reports.push(session.check_watson([Constituent::Maass(m); 3], eps)?);
                }
            }
            emit_reports(&st, reports)
        }
        Command::Localzeta { p, s, satake, random, seed } => {
            let tempered = |t: f64| (C64::new(0.0, t), C64::new(0.0, -t));
            let mut reports = Vec::new();
            if let Some(n) = random {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for i in 0..n {
                    let sat = [0; 3].map(|_| tempered(rng.gen_range(-20.0..20.0)));
                    let (p, s) = ([2u64, 3, 5][i % 3], [1.0, 1.25, 2.0][(i / 3) % 3]);
                    reports.push(check_local_zeta_unramified(p, C64::new(s, 0.0), sat, eps)?);
                }
            } else {
                let t = satake.unwrap_or_else(|| vec![0.0; 3]);
                let sat = [tempered(t[0]), tempered(t[1]), tempered(t[2])];
                reports.push(check_local_zeta_unramified(p, C64::new(s, 0.0), sat, eps)?);
            }
            emit_reports(&st, reports)
        }
        Command::Arch { kind } => {
            let reports = match kind {
                None => arch_battery(&st)?,
                Some(ArchKind::Ikeda { s, sj }) => {
                    let v = sj.iter().map(|x| parse_complex(x)).collect::<Res<Vec<_>>>()?;
                    vec![check_ikeda_arch(s, [v[0], v[1], v[2]], eps.max(1e-9))?]
                }
                Some(ArchKind::GrossKudla { weights, s }) => {
                    let k: Vec<u32> = parse_list(&weights)?;
                    let [a, b, c] = k[..] else { return Err("--weights needs three values".into()) };
                    vec![check_gross_kudla_arch([a, b, c], s, 0.0)?]
                }
                Some(ArchKind::Kk0 { k, s3 }) => vec![check_gross_kudla_kk0(k, parse_complex(&s3)?, eps.max(1e-12))?],
                Some(ArchKind::Boundary { s }) => vec![check_ikeda_boundary(s)?],
            };
            emit_reports(&st, reports)
        }
        Command::Thirdmoment { from, to, maass_file } => {
            let forms = match maass_file {
                Some(p) => load_maass(&p)?,
                None => solve(from, to, Parity::Even, &st.maass_opts())?,
            };
            let r: ThirdMomentReport = session.run_thrd_experiment(&forms, eps)?;
            let mut csv = String::from("t,eigenvalue,moment,trend,ratio,watson_route,cross_relative,cross_pass\n");
            for row in &r.rows {
                csv += &format!(
                    "{},{},{:e},{:e},{:e},{:e},{:e},{}\n",
                    row.t, row.eigenvalue, row.moment, row.trend, row.ratio, row.watson_route, row.cross_relative, row.cross_pass
                );
            }
            write_outputs(&st.out, &[serde_json::to_string(&r)?], &csv)?;
            Ok(r.rows.len() >= 4 && r.trend_within_factor_10 && r.cross_checks_pass)
        }
        Command::Report { files } => {
            let mut reports = Vec::new();
            for f in &files {
                reports.extend(read_lines::<IdentityReport>(f)?);
            }
            let mut ok = !reports.is_empty();
            for r in &reports {
                if r.pass != r.verdict() {
                    eprintln!("{}: stored verdict {} but recomputed {}", r.identity_id, r.pass, r.verdict());
                    ok = false;
                }
                ok &= r.verdict();
            }
            print!("{}", csv_summary(&reports));
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
