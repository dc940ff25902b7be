use std::fs;
use std::io::Write;
use std::path::Path;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use vplane::metrics::{histogram_csv, reports_to_csv, sweep, weight_curves_csv, DistortionReport};
use vplane::stego::{bits_to_bytes, bytes_to_bits, capacity, fill_bits, LENGTH_PREFIX_BITS};
use vplane::{
    embed_message, extract_message, read_pgm, synthesize, write_pgm, EmbedPlan, EmbedReport, GrayImage, LengthMode,
    NumeralSystem, Pattern,
};

use crate::error::CliError;
use crate::{Command, EmbedArgs, ExtractArgs, PatternArg, SystemArgs};

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Plan { system, json } => plan(&system, json),
        Command::Table {
            system,
            from,
            to,
            csv,
            force,
        } => table(&system, from, to, csv.as_deref(), force),
        Command::Synth {
            pattern,
            width,
            height,
            value,
            out,
            force,
        } => synth(pattern, width, height, value, &out, force),
        Command::Embed(args) => embed(&args),
        Command::Extract(args) => extract(&args),
        Command::Analyze {
            cover,
            stego,
            system,
            plane,
            csv,
            force,
        } => analyze(&cover, &stego, &system, plane, csv.as_deref(), force),
        Command::Sweep {
            cover,
            systems,
            planes,
            message,
            k,
            csv,
            weights_csv,
            force,
        } => {
            check_writable(csv.as_deref(), force)?;
            check_writable(weights_csv.as_deref(), force)?;
            let cover = load(&cover)?;
            let systems = systems
                .into_iter()
                .map(|kind| NumeralSystem::new(kind, k))
                .collect::<vplane::Result<Vec<_>>>()?;
            let bits = fill_bits(&bytes_to_bits(message.as_bytes()), cover.len());
            let reports = sweep(&cover, &bits, &systems, planes.as_deref())?;
            emit(csv.as_deref(), reports_to_csv(&reports).as_bytes())?;
            if let Some(path) = weights_csv.as_deref() {
                write_file(path, weight_curves_csv(&systems).as_bytes())?;
            }
            eprintln!("{} configurations", reports.len());
            Ok(())
        }
    }
}

fn system(args: &SystemArgs) -> Result<NumeralSystem> {
    Ok(NumeralSystem::new(args.system, args.k)?)
}

fn check_writable(path: Option<&Path>, force: bool) -> Result<()> {
    match path {
        Some(p) if p.exists() && !force => Err(CliError::Usage(format!(
            "{} exists; pass --force to overwrite",
            p.display()
        ))),
        _ => Ok(()),
    }
}

fn load(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(read_pgm(&bytes)?)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Writes to `path`, or stdout when none is given.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => write_file(p, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize") + "\n"
}

#[derive(Serialize)]
struct PlanSummary<'a> {
    system: String,
    k: u32,
    planes: usize,
    weights: &'a [u64],
    representable_min: u64,
    representable_max: u64,
    max_value: u64,
}

fn plan(args: &SystemArgs, json: bool) -> Result<()> {
    let sys = system(args)?;
    let (lo, hi) = sys.representable_range();
    if json {
        let summary = PlanSummary {
            system: sys.kind().to_string(),
            k: args.k,
            planes: sys.planes(),
            weights: sys.weights(),
            representable_min: lo,
            representable_max: hi,
            max_value: sys.max_value(),
        };
        print!("{}", to_json(&summary));
    } else {
        let weights: Vec<String> = sys.weights().iter().map(u64::to_string).collect();
        println!("system: {}", sys.kind());
        println!("k: {}", args.k);
        println!("n={}", sys.planes());
        println!("weights: {}", weights.join(" "));
        println!("representable range: [{lo}, {hi}] covers [0, {}]", sys.max_value());
    }
    Ok(())
}

fn table(args: &SystemArgs, from: u64, to: Option<u64>, csv: Option<&Path>, force: bool) -> Result<()> {
    check_writable(csv, force)?;
    let sys = system(args)?;
    let rows = sys.decomposition_table(from, to.unwrap_or(sys.max_value()))?;
    match csv {
        Some(path) => {
            let mut out = String::from("value,decomposition\n");
            for (v, s) in &rows {
                out.push_str(&format!("{v},{s}\n"));
            }
            write_file(path, out.as_bytes())
        }
        None => {
            let width = sys.max_value().to_string().len();
            let mut out = String::new();
            for (v, s) in &rows {
                out.push_str(&format!("{v:>width$}  {s}\n"));
            }
            emit(None, out.as_bytes())
        }
    }
}

fn synth(pattern: PatternArg, width: usize, height: usize, value: u64, out: &Path, force: bool) -> Result<()> {
    check_writable(Some(out), force)?;
    let pattern = match pattern {
        PatternArg::Gradient => Pattern::Gradient,
        PatternArg::Checker => Pattern::Checker,
        PatternArg::Random => Pattern::UniformRandom(value),
        PatternArg::Constant => Pattern::Constant(
            u8::try_from(value).map_err(|_| CliError::Usage(format!("constant {value} exceeds 255")))?,
        ),
    };
    write_file(out, &write_pgm(&synthesize(pattern, width, height)?))
}

#[derive(Serialize)]
struct EmbedSummary {
    system: String,
    plane: usize,
    length_mode: &'static str,
    message_bits: u64,
    embed: EmbedReport,
    distortion: DistortionReport,
}

fn message_bytes(args: &EmbedArgs) -> Result<Vec<u8>> {
    match (&args.message, &args.message_file, args.random) {
        (Some(text), None, None) => Ok(text.as_bytes().to_vec()),
        (None, Some(path), None) => fs::read(path).map_err(|e| CliError::io(path, e)),
        (None, None, Some(len)) => {
            let seed = args
                .seed
                .ok_or_else(|| CliError::Usage("--random needs an explicit --seed".into()))?;
            let mut bytes = vec![0u8; len];
            ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut bytes);
            Ok(bytes)
        }
        _ => Err(CliError::Usage(
            "give exactly one of --message, --message-file, --random".into(),
        )),
    }
}

fn embed(args: &EmbedArgs) -> Result<()> {
    check_writable(Some(&args.out), args.force)?;
    check_writable(args.report.as_deref(), args.force)?;
    let sys = system(&args.system)?;
    let cover = load(&args.cover)?;
    let payload = message_bytes(args)?;

    let cap = capacity(&cover, &sys, args.plane)?;
    let header = if args.raw { 0 } else { LENGTH_PREFIX_BITS };
    let mut bits = bytes_to_bits(&payload);
    if args.fill {
        bits = fill_bits(&bits, cap.saturating_sub(header) as usize);
    }
    let mode = if args.raw {
        LengthMode::ExplicitLength(bits.len() as u64)
    } else {
        LengthMode::LengthPrefix
    };
    let plan = EmbedPlan::new(sys.clone(), args.plane, mode)?;
    let (stego, report) = embed_message(&cover, &plan, &bits)?;
    write_file(&args.out, &write_pgm(&stego))?;

    let mut distortion = DistortionReport::measure(&sys, args.plane, &cover, &stego, cap)?;
    distortion.bits_embedded = report.bits_embedded;
    let summary = EmbedSummary {
        system: sys.kind().to_string(),
        plane: args.plane,
        length_mode: if args.raw { "explicit" } else { "prefix" },
        message_bits: bits.len() as u64,
        embed: report,
        distortion,
    };
    let json = to_json(&summary);
    if let Some(path) = &args.report {
        write_file(path, json.as_bytes())?;
    }
    print!("{json}");
    eprintln!(
        "embedded {} bits ({} message) in {} of {} eligible pixels; PSNR {:.2} dB",
        report.bits_embedded,
        bits.len(),
        report.bits_embedded,
        cap,
        summary.distortion.psnr_empirical_db
    );
    Ok(())
}

fn extract(args: &ExtractArgs) -> Result<()> {
    check_writable(args.out.as_deref(), args.force)?;
    let sys = system(&args.system)?;
    let stego = load(&args.stego)?;
    let mode = match args.length {
        Some(n) => LengthMode::ExplicitLength(n),
        None => LengthMode::LengthPrefix,
    };
    let plan = EmbedPlan::new(sys, args.plane, mode)?;
    let bits = extract_message(&stego, &plan)?;
    if bits.len() % 8 != 0 {
        eprintln!("note: {} bits is not a whole number of bytes; last byte zero-padded", bits.len());
    }
    emit(args.out.as_deref(), &bits_to_bytes(&bits))
}

fn analyze(
    cover: &Path,
    stego: &Path,
    args: &SystemArgs,
    plane: usize,
    csv: Option<&Path>,
    force: bool,
) -> Result<()> {
    check_writable(csv, force)?;
    let sys = system(args)?;
    let (cover, stego) = (load(cover)?, load(stego)?);
    cover.same_shape(&stego)?;
    let cap = capacity(&cover, &sys, plane)?;
    let report = DistortionReport::measure(&sys, plane, &cover, &stego, cap)?;
    print!("{}", to_json(&report));
    if let Some(path) = csv {
        write_file(path, histogram_csv(&cover, &stego).as_bytes())?;
    }
    Ok(())
}
