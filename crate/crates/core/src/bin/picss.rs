use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use picss::cache::{cache_key, PageCache};
use picss::chart::{emit_svg, ChartSpec};
use picss::gf::FieldDescriptor;
use picss::groups::GroupFamily;
use picss::picard::{compute_picard, pic_page_with_zero_line, PicEntryKind, PicPage};
use picss::report::{certify_faithfulness, RunResult};
use picss::reproduce::{self, Category};
use picss::specseq::{PageRecord, SpectralSequence, Variant, Window, DEFAULT_MARGIN};
use picss::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_AMBIGUOUS: u8 = 2;
const EXIT_CERTIFICATE: u8 = 3;

#[derive(Parser)]
#[command(name = "picss", version, about = "Picard groups of stable module categories via spectral sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute T(G) and print its invariant factors.
    Picard(Job),
    /// Run the Tate spectral sequence and certify that it vanishes.
    Faithful(Job),
    /// Draw or dump one page.
    Chart(ChartArgs),
    /// Run every reproduction check and print a pass/fail table.
    Reproduce(ReproduceArgs),
    /// Run Picard jobs from a file, one `GROUP [FIELD]` per line.
    Batch(BatchArgs),
}

#[derive(Args, Clone)]
struct Job {
    #[arg(long)]
    group: GroupFamily,
    /// Defaults to the prime field.
    #[arg(long)]
    field: Option<FieldDescriptor>,
    #[arg(long, default_value_t = Window::default())]
    window: Window,
    #[arg(long)]
    emit: Option<Emit>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Page cache directory; PICSS_CACHE takes precedence.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Print the ring the spectral sequence lives in.
    #[arg(long)]
    dump_ring: bool,
}

#[derive(Args)]
struct ChartArgs {
    #[command(flatten)]
    job: Job,
    #[arg(long, default_value = "tate")]
    variant: ChartVariant,
    #[arg(long, default_value_t = 2)]
    page: u32,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(long)]
    only: Option<Category>,
    /// Add an inconsistent seed to the C9 datum.
    #[arg(long)]
    corrupt_seed: bool,
}

#[derive(Args)]
struct BatchArgs {
    file: PathBuf,
    #[arg(long, default_value_t = Window::default())]
    window: Window,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    Json,
    Svg,
    Txt,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ChartVariant {
    Hs,
    Hfpss,
    Tate,
    Pic,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::AmbiguousExtension(_) => EXIT_AMBIGUOUS,
            Error::DSquaredNonZero { .. }
            | Error::IllDefinedDifferential { .. }
            | Error::AmbiguousPairing { .. }
            | Error::NoExtension(_)
            | Error::NotCollapsed(_) => EXIT_CERTIFICATE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: match e {
                Error::Unsupported(m) => m,
                e => e.to_string(),
            },
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::from(e).into()
    }
}

type CmdResult = Result<(), Failure>;

impl Job {
    fn field(&self) -> Result<FieldDescriptor, Error> {
        match self.field {
            Some(f) => Ok(f),
            None => {
                let p = self
                    .group
                    .prime()
                    .ok_or_else(|| Error::InvalidGroup(self.group.to_string(), "no default field".into()))?;
                FieldDescriptor::prime(p)
            }
        }
    }

    fn cache(&self) -> Option<PageCache> {
        PageCache::from_env(self.cache.clone())
    }

    fn dump_ring(&self, field: FieldDescriptor) -> CmdResult {
        if self.dump_ring {
            let ring = self.group.extension_datum(field)?.hfpss_ring()?;
            println!("{}", serde_json::to_string_pretty(&ring.to_json()).map_err(Error::from)?);
        }
        Ok(())
    }
}

fn write_out(dir: &Path, name: &str, contents: &str) -> CmdResult {
    fs::create_dir_all(dir)?;
    fs::write(dir.join(name), contents)?;
    Ok(())
}

fn file_stem(g: GroupFamily, f: FieldDescriptor) -> String {
    format!("{g}_{f}").replace(['(', ')', '^'], "")
}

fn store_all(cache: Option<&PageCache>, key: &str, records: &[PageRecord]) -> CmdResult {
    if let Some(c) = cache {
        for rec in records {
            c.store(key, rec)?;
        }
    }
    Ok(())
}

fn picard_result(job: &Job) -> Result<RunResult, Failure> {
    let field = job.field()?;
    let pic = compute_picard(job.group, field, job.window)?;
    let (cert, records) = certify_faithfulness(job.group, field, job.window)?;
    let key = cache_key(job.group, field, Variant::Tate, job.window);
    store_all(job.cache().as_ref(), &key, &records)?;
    Ok(RunResult::new(&pic, &cert))
}

fn cmd_picard(job: &Job) -> CmdResult {
    let field = job.field()?;
    job.dump_ring(field)?;
    let result = picard_result(job)?;
    let json = result.to_json()?;
    if let Some(dir) = &job.out {
        write_out(dir, &format!("{}.json", file_stem(job.group, field)), &json)?;
    }
    match job.emit {
        Some(Emit::Json) => println!("{json}"),
        _ => println!("{}", result.picard),
    }
    Ok(())
}

fn cmd_faithful(job: &Job) -> CmdResult {
    let field = job.field()?;
    job.dump_ring(field)?;
    let (cert, records) = certify_faithfulness(job.group, field, job.window)?;
    let key = cache_key(job.group, field, Variant::Tate, job.window);
    store_all(job.cache().as_ref(), &key, &records)?;
    let json = serde_json::to_string_pretty(&cert).map_err(Error::from)?;
    if let Some(dir) = &job.out {
        write_out(dir, &format!("{}_faithful.json", file_stem(job.group, field)), &json)?;
    }
    println!("{json}");
    if cert.contractible {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_CERTIFICATE,
            message: format!("{} survivors remain on E{}", cert.survivors.len(), cert.pages.last().unwrap_or(&2)),
        })
    }
}

fn sequence_record(job: &Job, field: FieldDescriptor, variant: Variant, r: u32) -> Result<PageRecord, Failure> {
    let cache = job.cache();
    let key = cache_key(job.group, field, variant, job.window);
    if let Some(rec) = cache.as_ref().map(|c| c.load(&key, r)).transpose()?.flatten() {
        return Ok(rec);
    }
    let mut ss = SpectralSequence::new(job.group.extension_datum(field)?, variant, job.window)?;
    ss.run_to(r + 1)?;
    let records = (2..=r).map(|k| ss.record(k)).collect::<Result<Vec<_>, _>>()?;
    store_all(cache.as_ref(), &key, &records)?;
    Ok(records.into_iter().last().expect("at least one page"))
}

fn pic_text(page: &PicPage) -> String {
    let mut out = format!("E{} of the Picard spectral sequence\n", page.r);
    for (&(s, t), e) in &page.entries {
        let desc = match &e.kind {
            PicEntryKind::VectorSpace { dim: 0, .. } | PicEntryKind::Finite { .. } if e.is_zero() => continue,
            PicEntryKind::VectorSpace { dim, p } => format!("F{p}^{dim}: {}", e.labels.join(", ")),
            PicEntryKind::Finite { group } => group.to_string(),
            PicEntryKind::Units { group } => format!("units {group}"),
            PicEntryKind::UnitsQuotient { exponent, group } => format!("units mod {exponent}th powers {group}"),
        };
        out.push_str(&format!("({s}, {t}) {desc}\n"));
    }
    out
}

fn record_text(rec: &PageRecord) -> String {
    let mut out = format!("E{} of the {} spectral sequence\n", rec.r, rec.variant);
    for e in &rec.entries {
        out.push_str(&format!("({}, {}) {}\n", e.s, e.t, e.basis.join(", ")));
    }
    for d in &rec.differentials {
        out.push_str(&format!("d{}: {:?} -> {:?} {:?}\n", rec.r, d.source, d.target, d.matrix));
    }
    out
}

fn cmd_chart(args: &ChartArgs) -> CmdResult {
    let job = &args.job;
    let field = job.field()?;
    job.dump_ring(field)?;
    let r = args.page;
    if !(2..=DEFAULT_MARGIN + 1).contains(&r) {
        return Err(Failure {
            code: EXIT_USAGE,
            message: format!("page {r} is not available; pages run from 2 to {}", DEFAULT_MARGIN + 1),
        });
    }
    let emit = job.emit.unwrap_or(Emit::Svg);
    let name = match args.variant {
        ChartVariant::Hs => "hs",
        ChartVariant::Hfpss => "hfpss",
        ChartVariant::Tate => "tate",
        ChartVariant::Pic => "pic",
    };
    let title = format!("{} over {field}: {name} E{r}", job.group);
    let (text, ext) = if args.variant == ChartVariant::Pic {
        let mut ss = SpectralSequence::new(job.group.extension_datum(field)?, Variant::Hfpss, job.window)?;
        ss.run_to(r)?;
        let page = pic_page_with_zero_line(&ss, r)?;
        match emit {
            Emit::Svg => (emit_svg(&ChartSpec::from_pic(&page, &title)), "svg"),
            Emit::Json => (serde_json::to_string_pretty(&page).map_err(Error::from)?, "json"),
            Emit::Txt => (pic_text(&page), "txt"),
        }
    } else {
        let variant = match args.variant {
            ChartVariant::Hs => Variant::Hs,
            ChartVariant::Hfpss => Variant::Hfpss,
            _ => Variant::Tate,
        };
        let rec = sequence_record(job, field, variant, r)?;
        match emit {
            Emit::Svg => (emit_svg(&ChartSpec::from_record(&rec, job.window, &title)), "svg"),
            Emit::Json => (rec.to_json()?, "json"),
            Emit::Txt => (record_text(&rec), "txt"),
        }
    };
    match &job.out {
        Some(dir) => write_out(dir, &format!("{}_{name}_E{r}.{ext}", file_stem(job.group, field)), &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_reproduce(args: &ReproduceArgs) -> CmdResult {
    let outcomes = reproduce::run(&reproduce::Options {
        only: args.only,
        corrupt_seed: args.corrupt_seed,
    });
    print!("{}", reproduce::format_table(&outcomes));
    match outcomes.iter().find(|o| !o.passed) {
        None => Ok(()),
        Some(o) => Err(Failure {
            code: EXIT_CERTIFICATE,
            message: format!("first failure: [{}] {}: {}", o.category, o.name, o.detail),
        }),
    }
}

fn parse_batch_line(line: &str, args: &BatchArgs) -> Result<Job, Error> {
    let mut words = line.split_whitespace();
    let group = words.next().unwrap_or_default().parse()?;
    let field = words.next().map(str::parse).transpose()?;
    if let Some(extra) = words.next() {
        return Err(Error::Parse(format!("unexpected `{extra}`")));
    }
    Ok(Job {
        group,
        field,
        window: args.window,
        emit: None,
        out: args.out.clone(),
        cache: args.cache.clone(),
        dump_ring: false,
    })
}

fn cmd_batch(args: &BatchArgs) -> CmdResult {
    let text = fs::read_to_string(&args.file)?;
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let results: Vec<Result<(String, RunResult), Failure>> = lines
        .par_iter()
        .map(|line| {
            let job = parse_batch_line(line, args)?;
            let field = job.field()?;
            let result = picard_result(&job)?;
            if let Some(dir) = &job.out {
                write_out(dir, &format!("{}.json", file_stem(job.group, field)), &result.to_json()?)?;
            }
            Ok((format!("{} {field}", job.group), result))
        })
        .collect();
    let mut worst = 0;
    for (line, res) in lines.iter().zip(results) {
        match res {
            Ok((name, r)) => println!("{name}: {}", r.picard),
            Err(f) => {
                println!("{line}: error: {}", f.message);
                worst = worst.max(f.code);
            }
        }
    }
    if worst == 0 {
        Ok(())
    } else {
        Err(Failure {
            code: worst,
            message: "some batch jobs failed".into(),
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Picard(job) => cmd_picard(job),
        Command::Faithful(job) => cmd_faithful(job),
        Command::Chart(args) => cmd_chart(args),
        Command::Reproduce(args) => cmd_reproduce(args),
        Command::Batch(args) => cmd_batch(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
