//! Command implementations shared by the binary and the integration tests.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::rngs::StdRng;
use rand::SeedableRng;
use thiserror::Error;

use imcsim::bits::lanes_to_binary;
use imcsim::config::{ConfigError, MacroConfig, ModelConfig};
use imcsim::corpus::random_program;
use imcsim::image;
use imcsim::oracle::{ref_arith, ref_logic, ArithOp, WordVector};
use imcsim::perf::{self, sweep_csv, ArchKind, EnergyLedger, ModelError, OpClass, SweepRow};
use imcsim::sequencer::{write_trace, Opcode, Program, ProgramError, Simulator, Step};
use imcsim::{RowAddress, SimError};

use crate::asm::{assemble, AsmError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Asm(#[from] AsmError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Image(#[from] imcsim::image::ImageError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Run(#[from] ProgramError),
    #[error("simulation error: {0}")]
    Sim(#[from] SimError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 = parse/config, 3 = hazard or other simulation abort, 4 = I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Asm(_) | CliError::Config(_) | CliError::Image(_) | CliError::Model(_) | CliError::Usage(_) => 2,
            CliError::Run(_) | CliError::Sim(_) => 3,
            CliError::Io { .. } => 4,
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })
}

/// Write-then-rename so consumers never observe a half-written file.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io_err = |source| CliError::Io { path: path.into(), source };
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    fs::write(&tmp, contents).map_err(io_err)?;
    fs::rename(&tmp, path).map_err(io_err)?;
    Ok(())
}

pub fn load_model(config: Option<&Path>) -> Result<ModelConfig, CliError> {
    match config {
        Some(path) => Ok(ModelConfig::from_text(&read_file(path)?)?),
        None => Ok(ModelConfig::default()),
    }
}

fn load_program(path: &Path, cfg: &MacroConfig, prec_override: Option<usize>) -> Result<Program, CliError> {
    let mut text = read_file(path)?;
    if let Some(p) = prec_override {
        // a leading PREC wins over the file's own directive
        if !text.lines().any(|l| l.trim_start().to_ascii_uppercase().starts_with("PREC")) {
            text = format!("PREC {p}\n{text}");
        }
    }
    let mut program = assemble(&text, cfg)?;
    if let Some(p) = prec_override {
        for step in &mut program.steps {
            step.op.precision = p;
            step.op.validate(cfg).map_err(CliError::Sim)?;
        }
    }
    Ok(program)
}

pub struct RunPaths {
    pub trace_out: PathBuf,
    pub image_out: PathBuf,
    pub energy_out: PathBuf,
}

pub struct RunSummary {
    pub ops: usize,
    pub cycles: usize,
    pub total_energy_fj: f64,
    pub clock_period_ps: f64,
    pub frequency_ghz: Option<f64>,
    pub sim_time_ns: f64,
}

impl RunSummary {
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "ops: {}, cycles: {}", self.ops, self.cycles);
        let _ = writeln!(s, "energy: {:.1} fJ", self.total_energy_fj);
        match self.frequency_ghz {
            Some(f) => {
                let _ = writeln!(
                    s,
                    "clock: {:.0} ps/cycle ({f:.3} GHz cap), simulated time {:.3} ns",
                    self.clock_period_ps, self.sim_time_ns
                );
            }
            None => {
                let _ = writeln!(
                    s,
                    "clock: {:.0} ps/cycle, simulated time {:.3} ns",
                    self.clock_period_ps, self.sim_time_ns
                );
            }
        }
        s
    }
}

/// Assembles, runs, and writes the trace, final image and energy summary.
pub fn cmd_run(
    program_path: &Path,
    image_path: Option<&Path>,
    config_path: Option<&Path>,
    prec_override: Option<usize>,
    vdd_override: Option<f64>,
    paths: &RunPaths,
) -> Result<RunSummary, CliError> {
    let model = load_model(config_path)?;
    let program = load_program(program_path, &model.macro_cfg, prec_override)?;
    let mut sim = Simulator::new(&model)?;
    if let Some(path) = image_path {
        image::load(sim.array_mut(), &read_file(path)?)?;
    }
    let trace = sim.run_program(&program)?;

    let mut ledger = EnergyLedger::default();
    for step in &program.steps {
        let op = &step.op;
        ledger.record(
            op.opcode,
            op.precision,
            op.separator,
            model.energy.energy_of(op.opcode, op.precision, op.separator).map_err(CliError::Model)?,
        );
    }

    let mut trace_text = Vec::new();
    write_trace(&mut trace_text, &trace).expect("writing to a Vec cannot fail");
    write_atomic(&paths.trace_out, &String::from_utf8(trace_text).expect("trace is utf-8"))?;
    write_atomic(&paths.image_out, &image::dump(sim.array()))?;
    write_atomic(&paths.energy_out, &ledger.to_csv())?;

    let precision = program.steps.first().map(|s| s.op.precision).unwrap_or(model.macro_cfg.precision);
    let period = model.delay.clock_period_ps(precision)?;
    let vdd = vdd_override.or(program.vdd).unwrap_or(model.macro_cfg.vdd);
    let frequency_ghz = model.freq.max_frequency(vdd).ok().map(|f| f / 1e9);
    Ok(RunSummary {
        ops: program.steps.len(),
        cycles: trace.len(),
        total_energy_fj: ledger.total_fj(),
        clock_period_ps: period,
        frequency_ghz,
        sim_time_ns: trace.len() as f64 * period / 1000.0,
    })
}

/// Word-level shadow of the destination rows, used by `check` as the second,
/// independent execution route. Scratch traffic of multi-cycle ops is not
/// modelled: the dummy array is scratch space, and programs that read rows
/// they never wrote get whatever the reference semantics say (zero).
struct Shadow {
    rows: BTreeMap<RowAddress, Vec<bool>>,
    lanes: usize,
}

impl Shadow {
    fn new(lanes: usize) -> Self {
        Self { rows: BTreeMap::new(), lanes }
    }

    fn read(&self, addr: &RowAddress) -> Vec<bool> {
        self.rows.get(addr).cloned().unwrap_or_else(|| vec![false; self.lanes])
    }

    fn words(&self, addr: &RowAddress, width: u32, group: u32) -> WordVector {
        imcsim::oracle::unpack_lanes(&self.read(addr), width, group).expect("shadow rows tile evenly")
    }

    fn apply(&mut self, step: &Step) -> Vec<bool> {
        let op = &step.op;
        let p = op.precision as u32;
        let group = op.group_width() as u32;
        let lanes = match op.opcode {
            Opcode::Write => step.imm.clone().expect("assembler always attaches WRITE immediates"),
            Opcode::Copy => self.read(&op.srcs[0]),
            Opcode::Shl => {
                let a = self.words(&op.srcs[0], p, group);
                imcsim::oracle::pack_lanes(&ref_arith(ArithOp::Shl, &a, &a, p, p).unwrap(), group, self.lanes)
                    .unwrap()
            }
            Opcode::Add | Opcode::AddSh | Opcode::Sub | Opcode::Mult => {
                let a = self.words(&op.srcs[0], p, group);
                let b = self.words(&op.srcs[1], p, group);
                let (arith, out) = match op.opcode {
                    Opcode::Add => (ArithOp::Add, p),
                    Opcode::AddSh => (ArithOp::AddSh, p),
                    Opcode::Sub => (ArithOp::Sub, p),
                    _ => (ArithOp::Mult, 2 * p),
                };
                let result = ref_arith(arith, &a, &b, p, out).unwrap();
                imcsim::oracle::pack_lanes(&result, group, self.lanes).unwrap()
            }
            logic => {
                let a = self.words(&op.srcs[0], p, group);
                let b = self.words(op.srcs.get(1).unwrap_or(&op.srcs[0]), p, group);
                let result = ref_logic(logic.logic_op().expect("logic opcode"), &a, &b).unwrap();
                imcsim::oracle::pack_lanes(&result, group, self.lanes).unwrap()
            }
        };
        self.rows.insert(op.dest, lanes.clone());
        lanes
    }
}

pub struct CheckReport {
    pub ops: usize,
    pub cycles: usize,
    pub failure: Option<CheckFailure>,
}

pub struct CheckFailure {
    pub op_index: usize,
    pub lane: usize,
    pub opcode: Opcode,
    pub expected: Vec<bool>,
    pub got: Vec<bool>,
}

impl CheckReport {
    pub fn render(&self) -> String {
        match &self.failure {
            None => format!("PASS: {} ops, {} cycles, simulator matches the word-level reference\n", self.ops, self.cycles),
            Some(f) => format!(
                "FAIL: op {} ({}) first mismatch at lane {}\n  expected {}\n  got      {}\n",
                f.op_index,
                f.opcode,
                f.lane,
                lanes_to_binary(&f.expected),
                lanes_to_binary(&f.got),
            ),
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs the simulator and the word-level reference side by side, comparing
/// every destination row and auditing per-op cycle counts.
pub fn check_program(program: &Program, model: &ModelConfig, image_text: Option<&str>) -> Result<CheckReport, CliError> {
    let mut sim = Simulator::new(model)?;
    let mut shadow = Shadow::new(model.macro_cfg.lanes());
    if let Some(text) = image_text {
        image::load(sim.array_mut(), text)?;
        for (addr, lanes) in image::parse(text, &model.macro_cfg)? {
            shadow.rows.insert(addr, lanes);
        }
    }
    let mut cycles = 0usize;
    for (op_index, step) in program.steps.iter().enumerate() {
        let reports = sim
            .exec_op_observed(&step.op, step.imm.as_deref(), op_index, |_, _| {})
            .map_err(|source| CliError::Run(ProgramError { op_index, source }))?;
        let expected_cycles = step.op.opcode.cycles(step.op.precision);
        if reports.len() != expected_cycles {
            return Err(CliError::Usage(format!(
                "op {op_index} ({}) took {} cycles, contract says {expected_cycles}",
                step.op.opcode,
                reports.len()
            )));
        }
        cycles += reports.len();
        let expected = shadow.apply(step);
        let got = sim.read_lanes(&step.op.dest).map_err(CliError::Sim)?;
        if expected != got {
            let lane = expected.iter().zip(&got).position(|(e, g)| e != g).unwrap_or(0);
            return Ok(CheckReport {
                ops: program.steps.len(),
                cycles,
                failure: Some(CheckFailure { op_index, lane, opcode: step.op.opcode, expected, got }),
            });
        }
    }
    Ok(CheckReport { ops: program.steps.len(), cycles, failure: None })
}

pub fn cmd_check(
    program_path: &Path,
    image_path: Option<&Path>,
    config_path: Option<&Path>,
    prec_override: Option<usize>,
) -> Result<CheckReport, CliError> {
    let model = load_model(config_path)?;
    let program = load_program(program_path, &model.macro_cfg, prec_override)?;
    let image_text = image_path.map(read_file).transpose()?;
    check_program(&program, &model, image_text.as_deref())
}

/// Checks `count` seeded random programs; stops at the first failure.
pub fn cmd_check_random(
    count: usize,
    seed: u64,
    precision: Option<usize>,
    config_path: Option<&Path>,
) -> Result<(usize, Option<CheckReport>), CliError> {
    let model = load_model(config_path)?;
    let precision = precision.unwrap_or(model.macro_cfg.precision);
    let mut rng = StdRng::seed_from_u64(seed);
    for i in 0..count {
        let program = random_program(&model.macro_cfg, precision, 12, &mut rng);
        let report = check_program(&program, &model, None)?;
        if !report.passed() {
            return Ok((i, Some(report)));
        }
    }
    Ok((count, None))
}

pub struct BenchSummary {
    pub rows: Vec<SweepRow>,
    pub csv_path: PathBuf,
    pub single_op_parallel: u64,
    pub single_op_serial: u64,
}

impl BenchSummary {
    pub fn render(&self) -> String {
        format!(
            "single-op {}-bit MULT latency: {} cycles bit-parallel vs {} bit-serial (ratio {})\nwrote {} rows to {}\n",
            8,
            self.single_op_parallel,
            self.single_op_serial,
            self.single_op_serial as f64 / self.single_op_parallel as f64,
            self.rows.len(),
            self.csv_path.display(),
        )
    }
}

/// Sweeps the configured grid and writes `sweep.csv`.
pub fn cmd_bench(config_path: Option<&Path>, out: &Path, op_count: Option<u64>) -> Result<BenchSummary, CliError> {
    let model = load_model(config_path)?;
    let grid = &model.bench;
    let op_count = op_count.unwrap_or(grid.op_count);
    let mut rows = Vec::new();
    for &bl in &grid.bl_sizes {
        rows.extend(compare(&model, grid.precision, bl, op_count)?);
    }
    write_atomic(out, &sweep_csv(&rows))?;

    // the latency headline is bl-size independent; use a row wide enough for
    // 8-bit product groups even if the configured grid is smaller
    let headline_bl = (*grid.bl_sizes.iter().max().unwrap_or(&128)).max(model.macro_cfg.mux_ratio * 16);
    let latency = compare(&model, 8, headline_bl, 1)?;
    let pick = |arch: ArchKind| {
        latency
            .iter()
            .find(|r| r.arch == arch && r.op == OpClass::Mult)
            .map(|r| r.total_cycles)
            .unwrap_or(0)
    };
    Ok(BenchSummary {
        rows,
        csv_path: out.into(),
        single_op_parallel: pick(ArchKind::BitParallel),
        single_op_serial: pick(ArchKind::BitSerial),
    })
}

fn compare(model: &ModelConfig, n: usize, bl: usize, op_count: u64) -> Result<Vec<SweepRow>, CliError> {
    Ok(perf::compare_bitserial(n, bl, op_count, model.macro_cfg.mux_ratio, &model.baseline)?)
}

/// Dumps the energy table, or a single lookup when an op is named.
pub fn cmd_energy(
    config_path: Option<&Path>,
    out: Option<&Path>,
    lookup: Option<(Opcode, usize, bool)>,
) -> Result<String, CliError> {
    let model = load_model(config_path)?;
    if let Some((op, precision, separator)) = lookup {
        let fj = model.energy.energy_of(op, precision, separator)?;
        return Ok(format!("{} {}-bit {}: {} fJ\n", op, precision, if separator { "with separator" } else { "without separator" }, fj));
    }
    let csv = perf::energy_csv(&model.energy);
    if let Some(path) = out {
        write_atomic(path, &csv)?;
        Ok(format!("wrote {}\n", path.display()))
    } else {
        Ok(csv)
    }
}

/// Efficiency report for one op class.
pub fn cmd_tops(
    config_path: Option<&Path>,
    op: Opcode,
    precision: usize,
    vdd: f64,
    lanes_active: Option<u64>,
    separator: bool,
) -> Result<String, CliError> {
    let model = load_model(config_path)?;
    let lanes = lanes_active.unwrap_or((model.macro_cfg.lanes() * model.macro_cfg.banks) as u64);
    let report = perf::tops_per_watt(&model.energy, &model.freq, op, precision, separator, vdd, lanes)?;
    Ok(report.render())
}
