//! Macro geometry and the key-value model-parameter file.

use thiserror::Error;

use crate::perf::{BaselineCycles, BenchGrid, DelayModel, EnergyTable, FreqVoltageTable};

/// Geometry and operating point of one macro; the single source of truth for
/// lane layout. Default: 4 banks of 128 x 128 cells, 4:1 column interleave,
/// 4 dummy rows, 8-bit precision at 1.0 V.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroConfig {
    pub banks: usize,
    pub rows_per_bank: usize,
    pub cols_per_bank: usize,
    /// Column-interleave factor; accessed lanes = cols_per_bank / mux_ratio.
    pub mux_ratio: usize,
    pub dummy_rows: usize,
    /// Word width in bits; one word spans this many adjacent lanes.
    pub precision: usize,
    pub vdd: f64,
    /// Which column of each mux group is accessed.
    pub col_offset: usize,
}

impl Default for MacroConfig {
    fn default() -> Self {
        Self {
            banks: 4,
            rows_per_bank: 128,
            cols_per_bank: 128,
            mux_ratio: 4,
            dummy_rows: 4,
            precision: 8,
            vdd: 1.0,
            col_offset: 0,
        }
    }
}

pub const SUPPORTED_PRECISIONS: [usize; 3] = [2, 4, 8];

impl MacroConfig {
    /// Accessed column positions per row.
    pub fn lanes(&self) -> usize {
        self.cols_per_bank / self.mux_ratio
    }

    /// Physical column of a lane.
    pub fn lane_col(&self, lane: usize) -> usize {
        lane * self.mux_ratio + self.col_offset
    }

    /// Packed words per row at the configured precision.
    pub fn words(&self) -> usize {
        self.lanes() / self.precision
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.banks == 0 || self.rows_per_bank == 0 || self.cols_per_bank == 0 || self.dummy_rows == 0 {
            return Err(ConfigError::ZeroDimension);
        }
        if self.mux_ratio == 0 || self.cols_per_bank % self.mux_ratio != 0 {
            return Err(ConfigError::MuxMismatch { cols: self.cols_per_bank, mux: self.mux_ratio });
        }
        if self.col_offset >= self.mux_ratio {
            return Err(ConfigError::BadColOffset { offset: self.col_offset, mux: self.mux_ratio });
        }
        if !SUPPORTED_PRECISIONS.contains(&self.precision) {
            return Err(ConfigError::BadPrecision(self.precision));
        }
        if self.lanes() % self.precision != 0 {
            return Err(ConfigError::LaneMismatch { lanes: self.lanes(), precision: self.precision });
        }
        if !(self.vdd.is_finite() && self.vdd > 0.0) {
            return Err(ConfigError::BadVdd(self.vdd));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("geometry dimensions must be nonzero")]
    ZeroDimension,
    #[error("{cols} columns are not divisible by mux ratio {mux}")]
    MuxMismatch { cols: usize, mux: usize },
    #[error("column offset {offset} outside mux group of {mux}")]
    BadColOffset { offset: usize, mux: usize },
    #[error("unsupported precision {0} (supported: 2, 4, 8)")]
    BadPrecision(usize),
    #[error("{lanes} lanes are not divisible by precision {precision}")]
    LaneMismatch { lanes: usize, precision: usize },
    #[error("bad supply voltage {0}")]
    BadVdd(f64),
    #[error("config line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Every tunable of the model in one place: geometry plus the energy, delay,
/// frequency and baseline tables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModelConfig {
    pub macro_cfg: MacroConfig,
    pub energy: EnergyTable,
    pub delay: DelayModel,
    pub freq: FreqVoltageTable,
    pub baseline: BaselineCycles,
    pub bench: BenchGrid,
}

impl ModelConfig {
    /// Parses a key-value override file on top of the defaults.
    ///
    /// Format: `key = value`, one per line, `#` comments. Keys are listed in
    /// the README; unknown keys are rejected so typos cannot silently fall
    /// back to defaults.
    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ModelConfig::default();
        cfg.apply_overrides(text)?;
        cfg.macro_cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply_overrides(&mut self, text: &str) -> Result<(), ConfigError> {
        let mut pairs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
                line: line_no,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            pairs.push((line_no, key.trim().to_ascii_lowercase(), value.trim().to_string()));
        }

        // Base energies first: the logic/shift/copy classes default to the
        // same-precision add energy, so an add override re-derives them before
        // any explicit per-class override is applied.
        let add_keys = ["energy.add.2", "energy.add.4", "energy.add.8"];
        let mut rederive = false;
        for (line, key, value) in &pairs {
            if add_keys.contains(&key.as_str()) {
                self.set_key(*line, key, value)?;
                rederive = true;
            }
        }
        if rederive {
            self.energy.rederive_defaults();
        }
        for (line, key, value) in &pairs {
            if !add_keys.contains(&key.as_str()) {
                self.set_key(*line, key, value)?;
            }
        }
        Ok(())
    }

    fn set_key(&mut self, line: usize, key: &str, value: &str) -> Result<(), ConfigError> {
        let perr = |msg: String| ConfigError::Parse { line, msg };
        let as_usize = |v: &str| v.parse::<usize>().map_err(|e| perr(format!("`{v}`: {e}")));
        let as_u64 = |v: &str| v.parse::<u64>().map_err(|e| perr(format!("`{v}`: {e}")));
        let as_f64 = |v: &str| v.parse::<f64>().map_err(|e| perr(format!("`{v}`: {e}")));

        if let Some(rest) = key.strip_prefix("energy.") {
            return self.set_energy_key(line, rest, as_f64(value)?);
        }
        if let Some(rest) = key.strip_prefix("bitserial.") {
            let (op, n) = rest
                .split_once('.')
                .ok_or_else(|| perr(format!("expected bitserial.<add|mult>.<n>, got `{key}`")))?;
            let idx = precision_index(as_usize(n)?).map_err(&perr)?;
            let cycles = as_u64(value)?;
            match op {
                "add" => self.baseline.serial_add[idx] = cycles,
                "mult" => self.baseline.serial_mult[idx] = cycles,
                _ => return Err(perr(format!("unknown bit-serial op `{op}`"))),
            }
            return Ok(());
        }
        match key {
            "banks" => self.macro_cfg.banks = as_usize(value)?,
            "rows_per_bank" => self.macro_cfg.rows_per_bank = as_usize(value)?,
            "cols_per_bank" => self.macro_cfg.cols_per_bank = as_usize(value)?,
            "mux_ratio" => self.macro_cfg.mux_ratio = as_usize(value)?,
            "dummy_rows" => self.macro_cfg.dummy_rows = as_usize(value)?,
            "precision" => self.macro_cfg.precision = as_usize(value)?,
            "vdd" => self.macro_cfg.vdd = as_f64(value)?,
            "col_offset" => self.macro_cfg.col_offset = as_usize(value)?,
            "delay.bl_compute" => self.delay.bl_compute_ps = as_f64(value)?,
            "delay.sense" => self.delay.sense_ps = as_f64(value)?,
            "delay.logic_chain_8bit" => self.delay.logic_chain_8bit_ps = as_f64(value)?,
            "delay.writeback" => self.delay.writeback_ps = as_f64(value)?,
            "vdd_min" => self.freq.vdd_min = as_f64(value)?,
            "vdd_max" => self.freq.vdd_max = as_f64(value)?,
            "freq_anchors" => {
                let mut anchors = Vec::new();
                for part in value.split(',') {
                    let (v, f) = part
                        .trim()
                        .split_once(':')
                        .ok_or_else(|| perr(format!("expected `vdd:hz`, got `{part}`")))?;
                    anchors.push((as_f64(v.trim())?, as_f64(f.trim())?));
                }
                if anchors.len() < 2 {
                    return Err(perr("at least two frequency anchors required".into()));
                }
                if anchors.windows(2).any(|w| w[1].0 <= w[0].0 || w[1].1 < w[0].1) {
                    return Err(perr("frequency anchors must rise with vdd".into()));
                }
                self.freq.anchors = anchors;
            }
            "bench.bl_sizes" => {
                let sizes: Result<Vec<usize>, _> = value.split(',').map(|s| as_usize(s.trim())).collect();
                self.bench.bl_sizes = sizes?;
            }
            "bench.op_count" => self.bench.op_count = as_u64(value)?,
            "bench.precision" => self.bench.precision = as_usize(value)?,
            _ => return Err(perr(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    fn set_energy_key(&mut self, line: usize, rest: &str, value: f64) -> Result<(), ConfigError> {
        let perr = |msg: String| ConfigError::Parse { line, msg };
        let mut parts = rest.split('.');
        let class = parts.next().unwrap_or("");
        let n = parts
            .next()
            .ok_or_else(|| perr(format!("expected energy.<class>.<precision>, got `energy.{rest}`")))?;
        let idx = precision_index(n.parse::<usize>().map_err(|e| perr(format!("`{n}`: {e}")))?)
            .map_err(&perr)?;
        let sep = parts.next();
        if parts.next().is_some() {
            return Err(perr(format!("too many segments in `energy.{rest}`")));
        }
        let table = match (class, sep) {
            ("add", None) => &mut self.energy.add,
            ("sub", Some("with")) => &mut self.energy.sub_with,
            ("sub", Some("without")) => &mut self.energy.sub_without,
            ("mult", Some("with")) => &mut self.energy.mult_with,
            ("mult", Some("without")) => &mut self.energy.mult_without,
            ("logic", None) => &mut self.energy.logic,
            ("shl", None) => &mut self.energy.shl,
            ("addsh", None) => &mut self.energy.addsh,
            ("write", None) => &mut self.energy.write,
            ("copy", None) => &mut self.energy.copy,
            _ => return Err(perr(format!("unknown energy key `energy.{rest}`"))),
        };
        table[idx] = value;
        Ok(())
    }
}

pub(crate) fn precision_index(precision: usize) -> Result<usize, String> {
    match precision {
        2 => Ok(0),
        4 => Ok(1),
        8 => Ok(2),
        other => Err(format!("unsupported precision {other} (supported: 2, 4, 8)")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_geometry() {
        let cfg = MacroConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.lanes(), 32);
        assert_eq!(cfg.words(), 4);
        assert_eq!(cfg.lane_col(3), 12);
    }

    #[test]
    fn invalid_geometries_rejected() {
        let bad_mux = MacroConfig { cols_per_bank: 130, ..MacroConfig::default() };
        assert!(matches!(bad_mux.validate(), Err(ConfigError::MuxMismatch { .. })));
        let bad_prec = MacroConfig { precision: 3, ..MacroConfig::default() };
        assert!(matches!(bad_prec.validate(), Err(ConfigError::BadPrecision(3))));
        let bad_lanes = MacroConfig { cols_per_bank: 8, mux_ratio: 4, precision: 8, ..MacroConfig::default() };
        assert!(matches!(bad_lanes.validate(), Err(ConfigError::LaneMismatch { .. })));
        let bad_off = MacroConfig { col_offset: 4, ..MacroConfig::default() };
        assert!(matches!(bad_off.validate(), Err(ConfigError::BadColOffset { .. })));
    }

    #[test]
    fn overrides_apply() {
        let text = "
            # comment line
            banks = 1
            rows_per_bank = 16   # trailing comment
            cols_per_bank = 16
            precision = 2
            energy.mult.8.with = 3000.5
            energy.sub.2.without = 160
            delay.logic_chain_8bit = 200
            freq_anchors = 0.6:3.0e8, 1.0:2.0e9
            bench.bl_sizes = 64, 128
            bitserial.mult.4 = 20
        ";
        let cfg = ModelConfig::from_text(text).unwrap();
        assert_eq!(cfg.macro_cfg.banks, 1);
        assert_eq!(cfg.macro_cfg.lanes(), 4);
        assert_eq!(cfg.energy.mult_with[2], 3000.5);
        assert_eq!(cfg.energy.sub_without[0], 160.0);
        assert_eq!(cfg.delay.logic_chain_8bit_ps, 200.0);
        assert_eq!(cfg.freq.anchors, vec![(0.6, 3.0e8), (1.0, 2.0e9)]);
        assert_eq!(cfg.bench.bl_sizes, vec![64, 128]);
        assert_eq!(cfg.baseline.serial_mult[1], 20);
    }

    #[test]
    fn add_override_rederives_dependent_classes() {
        let cfg = ModelConfig::from_text("energy.add.4 = 100\nenergy.shl.4 = 90\n").unwrap();
        assert_eq!(cfg.energy.add[1], 100.0);
        assert_eq!(cfg.energy.logic[1], 100.0);
        assert_eq!(cfg.energy.shl[1], 90.0);
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = ModelConfig::from_text("banks = 2\nenergy.mul.8.with = 1\n").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 2, .. }));
    }
}
