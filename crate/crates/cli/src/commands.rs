use std::fs;
use std::path::Path;

use clap::Parser;
use moving_wells::families::FamilyState;
use moving_wells::propagate::{l2_distance, l2_norm, propagate, PropagationConfig};
use moving_wells::verify::VerificationReport;
use moving_wells::{Amplitude, Error, SampledField, Wave};
use num_complex::Complex64;
use serde_json::json;

use crate::args::{Cli, Command, FamilyArg, FiguresArgs, PropagateArgs, ReplayArgs, SampleArgs, VerifyArgs};
use crate::error::{CliError, CliResult};
use crate::figures::{figure_records, figure_specs};
use crate::formats::{write_reports, write_samples, PotentialCell, SampleRecord};
use crate::manifest::RunManifest;
use crate::sample::{family_id, normalization, sample_records, select, well_config};
use crate::suite::{run_negative_controls, run_suite, Scope};
use crate::{EXIT_OK, EXIT_VERIFY_FAILED};

pub fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Sample(a) => sample(&a),
        Command::Verify(a) => verify(&a),
        Command::Propagate(a) => propagate_cmd(&a),
        Command::Figures(a) => figures(&a),
        Command::Replay(a) => replay(&a),
    }
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn sample(a: &SampleArgs) -> CliResult<u8> {
    let well = well_config(&a.well)?;
    let family = family_id(a.family, &a.well)?;
    let states = select(family, &a.n, well)?;
    if a.times.is_empty() {
        return Err(CliError::usage("no times given"));
    }
    let records = sample_records(&states, &a.times, a.points)?;
    let dir = &a.out.out;
    ensure_dir(dir)?;
    let stem = a.stem();
    let csv = format!("{stem}.csv");
    write_samples(&dir.join(&csv), &records)?;
    let params = json!({
        "family": a.family.name(),
        "states": a.n,
        "times": a.times,
        "points": a.points,
        "L": a.well.length,
        "m": a.well.m,
        "omega": a.well.omega,
    });
    RunManifest::new("sample", a.argv(), params, vec![csv]).write(&dir.join(format!("{stem}.manifest.json")))?;
    println!("wrote {} records to {}", records.len(), dir.join(format!("{stem}.csv")).display());
    Ok(EXIT_OK)
}

fn print_reports(reports: &[VerificationReport]) {
    for r in reports {
        print!("{r}");
    }
}

fn verify(a: &VerifyArgs) -> CliResult<u8> {
    let well = well_config(&a.well)?;
    let scope = match a.family {
        None => Scope::All,
        Some(FamilyArg::Box) => Scope::Box,
        Some(FamilyArg::Pt) => Scope::PoschlTeller,
        Some(FamilyArg::Confluent) => {
            let cc = moving_wells::ConfluentConfig::new(a.well.m, a.well.omega)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Scope::Confluent(cc)
        }
    };
    let run_main = a.all || a.family.is_some() || !a.negative_controls;
    let dir = &a.out.out;
    ensure_dir(dir)?;
    let mut ok = true;
    let mut outputs = Vec::new();
    if run_main {
        let reports = run_suite(scope, &well, &a.times);
        print_reports(&reports);
        write_reports(dir, "verify", &reports)?;
        outputs.extend(["verify.txt".to_string(), "verify.json".to_string()]);
        ok &= reports.iter().all(VerificationReport::passed);
    }
    if a.negative_controls {
        let reports = run_negative_controls(&well, &a.times);
        print_reports(&reports);
        write_reports(dir, "verify_controls", &reports)?;
        outputs.extend(["verify_controls.txt".to_string(), "verify_controls.json".to_string()]);
        ok &= reports.iter().all(VerificationReport::passed);
    }
    let params = json!({
        "scope": a.family.map(|f| f.name()).unwrap_or("all"),
        "negative_controls": a.negative_controls,
        "times": a.times,
        "L": a.well.length,
        "m": a.well.m,
        "omega": a.well.omega,
    });
    RunManifest::new("verify", a.argv(), params, outputs).write(&dir.join("verify.manifest.json"))?;
    println!("verification {}", if ok { "passed" } else { "FAILED" });
    Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// Equal-weight superposition of normalized states, with the normalization
/// fixed at `t_norm` (norms are conserved along the evolution).
struct Superposition {
    parts: Vec<(FamilyState, f64)>,
}

impl Superposition {
    fn new(states: Vec<FamilyState>, t_norm: f64) -> CliResult<Self> {
        let weight = (states.len() as f64).sqrt().recip();
        let parts = states
            .into_iter()
            .map(|s| Ok((s, normalization(&s, t_norm)? * weight)))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(Self { parts })
    }
}

impl Wave for Superposition {
    fn amplitude(&self, x: f64, t: f64) -> moving_wells::Result<Amplitude> {
        self.parts.iter().try_fold(Complex64::new(0.0, 0.0), |acc, (s, c)| Ok(acc + s.amplitude(x, t)? * *c))
    }
}

fn propagate_cmd(a: &PropagateArgs) -> CliResult<u8> {
    let well = well_config(&a.well)?;
    let family = family_id(a.family, &a.well)?;
    let states = select(family, &a.n, well)?;
    let pc = PropagationConfig::new(family, well, a.nx, a.dt, a.from, a.to).map_err(|e| CliError::Usage(e.to_string()))?;
    let psi = Superposition::new(states, a.from)?;
    let (lo, hi) = well.interval(a.from)?;
    let initial = SampledField::sample(a.from, lo, hi, a.nx + 1, |x| psi.amplitude(x, a.from))?;
    let run = propagate(&initial, &pc).map_err(|e| match e {
        Error::UnstableRun { t, amplitude } => CliError::Format(format!(
            "propagation unstable at t = {t}: amplitude {amplitude:e} exceeds the blow-up bound; reduce --dt or raise --nx"
        )),
        other => CliError::Numeric(other),
    })?;
    let (lo1, hi1) = well.interval(a.to)?;
    let exact = SampledField::sample(a.to, lo1, hi1, a.nx + 1, |x| psi.amplitude(x, a.to))?;
    let distance = l2_distance(&run.field, &exact)?;
    let relative = distance / l2_norm(&exact);

    let dir = &a.out.out;
    ensure_dir(dir)?;
    let stem = format!("propagate_{}", a.family.name());
    let potential = family.bind(well);
    let mut records = Vec::with_capacity(run.field.n_points());
    for (x, v) in run.field.xs().zip(&run.field.values) {
        let cell = match moving_wells::Potential::potential(&potential, x, a.to)?.finite() {
            Some(p) => PotentialCell::Value(p),
            None => PotentialCell::Wall,
        };
        records.push(SampleRecord {
            t: a.to,
            state: "numeric".into(),
            x,
            re: v.re,
            im: v.im,
            density: v.norm_sqr(),
            potential: cell,
        });
    }
    write_samples(&dir.join(format!("{stem}.csv")), &records)?;
    let metrics = json!({
        "l2_distance": distance,
        "relative_l2_error": relative,
        "norm_drift": run.norm_drift(),
        "steps": run.steps,
        "non_dominant_steps": run.non_dominant_steps,
    });
    fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&metrics)? + "\n")?;
    let params = json!({
        "family": a.family.name(),
        "states": a.n,
        "from": a.from,
        "to": a.to,
        "nx": a.nx,
        "dt": a.dt,
        "L": a.well.length,
        "m": a.well.m,
        "omega": a.well.omega,
    });
    RunManifest::new("propagate", a.argv(), params, vec![format!("{stem}.csv"), format!("{stem}.json")])
        .write(&dir.join(format!("{stem}.manifest.json")))?;
    println!(
        "l2_error={relative:e} l2_distance={distance:e} norm_drift={:e} steps={}",
        run.norm_drift(),
        run.steps
    );
    Ok(EXIT_OK)
}

fn figures(a: &FiguresArgs) -> CliResult<u8> {
    let dir = &a.out.out;
    ensure_dir(dir)?;
    let mut outputs = Vec::new();
    let mut params = Vec::new();
    for spec in figure_specs() {
        let records = figure_records(&spec, a.points)?;
        write_samples(&dir.join(spec.file_name()), &records)?;
        println!("wrote {}", dir.join(spec.file_name()).display());
        outputs.push(spec.file_name());
        params.push(spec.parameters());
    }
    RunManifest::new("figures", a.argv(), json!({ "points": a.points, "figures": params }), outputs)
        .write(&dir.join("figures.manifest.json"))?;
    Ok(EXIT_OK)
}

fn replay(a: &ReplayArgs) -> CliResult<u8> {
    let manifest = RunManifest::read(&a.manifest)?;
    let mut argv = manifest.argv.clone();
    if let Some(out) = &a.out {
        match argv.iter().position(|s| s == "--out") {
            Some(i) if i + 1 < argv.len() => argv[i + 1] = out.display().to_string(),
            _ => argv.extend(["--out".into(), out.display().to_string()]),
        }
    }
    if argv.first().map(String::as_str) == Some("replay") {
        return Err(CliError::usage("a manifest cannot replay another replay"));
    }
    let cli = Cli::try_parse_from(std::iter::once("moving-wells".to_string()).chain(argv))
        .map_err(|e| CliError::Usage(format!("manifest arguments do not parse: {e}")))?;
    run(cli)
}
