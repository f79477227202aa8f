//! End-to-end tests of the `imcsim` binary: artifact contents, exit codes and
//! output determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_imcsim"))
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("imcsim-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn run_mult_worked_example() {
    let dir = tempdir("mult");
    let asm = write(&dir, "p.asm", "PREC 4\nMULT 0 m:0,m:1 -> m:2\n");
    let img = write(&dir, "m.img", "0:m:0 0b1010\n0:m:1 0b1011\n");
    let out = run_in(&dir, &["run", asm.to_str().unwrap(), "--image", img.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let trace = fs::read_to_string(dir.join("trace.jsonl")).unwrap();
    assert_eq!(trace.lines().count(), 6, "4-bit multiply traces 6 cycles");
    let last = trace.lines().last().unwrap();
    // 1010 x 1011 = 01101110 lands on the final add's write-back
    assert!(last.contains("\"opcode\":\"ADD\""), "{last}");
    assert!(last.contains("\"lanes_written\":\"0x0000006e\""), "{last}");
    assert!(last.contains("\"dest\":\"m:2\""), "{last}");

    let image = fs::read_to_string(dir.join("image.out.txt")).unwrap();
    assert!(image.contains("0:m:2 0b00000000000000000000000001101110"));

    let energy = fs::read_to_string(dir.join("energy_summary.csv")).unwrap();
    assert!(energy.contains("MULT,4,with,1,922.4"));
    assert!(energy.contains("TOTAL,-,-,1,922.4"));
}

#[test]
fn sub_energy_summary_at_2bit_with_separator() {
    let dir = tempdir("sub");
    let asm = write(&dir, "p.asm", "PREC 2\nSUB 0 m:0,m:1 -> m:2\n");
    let img = write(&dir, "m.img", "0:m:0 0b11\n0:m:1 0b01\n");
    let out = run_in(&dir, &["run", asm.to_str().unwrap(), "--image", img.to_str().unwrap()]);
    assert!(out.status.success());
    let energy = fs::read_to_string(dir.join("energy_summary.csv")).unwrap();
    assert!(energy.contains("SUB,2,with,1,136.5"), "{energy}");
    let trace = fs::read_to_string(dir.join("trace.jsonl")).unwrap();
    assert_eq!(trace.lines().count(), 2);
}

#[test]
fn empty_program_echoes_the_image() {
    let dir = tempdir("empty");
    let asm = write(&dir, "p.asm", "PREC 4\n");
    // canonical full-width form so the echo is byte-identical
    let row = format!("0:m:5 0b{}10100000\n", "0".repeat(24));
    let img = write(&dir, "m.img", &row);
    let out = run_in(&dir, &["run", asm.to_str().unwrap(), "--image", img.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(fs::read_to_string(dir.join("trace.jsonl")).unwrap(), "");
    assert_eq!(fs::read_to_string(dir.join("image.out.txt")).unwrap(), row);
}

#[test]
fn exit_codes() {
    let dir = tempdir("exit");
    // 2: parse error (unknown mnemonic)
    let bad = write(&dir, "bad.asm", "PREC 4\nMUL 0 m:0,m:1 -> m:2\n");
    let out = run_in(&dir, &["run", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    // 3: run-time hazard (multiply cannot claim three free dummy rows)
    let hazard = write(&dir, "hazard.asm", "PREC 4\nMULT 0 d:0,d:1 -> m:2\n");
    let out = run_in(&dir, &["run", hazard.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    // 4: missing input file
    let out = run_in(&dir, &["run", dir.join("absent.asm").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));

    // 0: success
    let ok = write(&dir, "ok.asm", "PREC 4\nNOT 0 m:0 -> m:1\n");
    let out = run_in(&dir, &["run", ok.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn run_outputs_are_byte_identical_across_runs() {
    let program = "PREC 8\nWRITE 0 m:0 0xa5a5\nWRITE 0 m:1 0x0f0f\nMULT 0 m:0,m:1 -> m:2\nSUB 0 m:0,m:1 -> m:3\nXOR 0 m:0,m:1 -> d:0\n";
    let mut snapshots = Vec::new();
    for tag in ["det-a", "det-b"] {
        let dir = tempdir(tag);
        let asm = write(&dir, "p.asm", program);
        let out = run_in(&dir, &["run", asm.to_str().unwrap()]);
        assert!(out.status.success());
        snapshots.push((
            fs::read(dir.join("trace.jsonl")).unwrap(),
            fs::read(dir.join("image.out.txt")).unwrap(),
            fs::read(dir.join("energy_summary.csv")).unwrap(),
        ));
    }
    assert_eq!(snapshots[0], snapshots[1]);
}

#[test]
fn trace_energy_sums_to_the_summary_total() {
    let dir = tempdir("ledger");
    let asm = write(
        &dir,
        "p.asm",
        "PREC 4\nWRITE 0 m:0 0x3c\nWRITE 0 m:1 0x55\nADD 0 m:0,m:1 -> m:2\nSUB 0 m:0,m:1 -> m:3\nMULT 0 m:0,m:1 -> m:4\nXOR 0 m:0,m:1 -> m:5\n",
    );
    let out = run_in(&dir, &["run", asm.to_str().unwrap()]);
    assert!(out.status.success());

    let trace = fs::read_to_string(dir.join("trace.jsonl")).unwrap();
    let trace_total: f64 = trace
        .lines()
        .map(|line| {
            let tail = line.split("\"energy_fJ\":").nth(1).unwrap();
            tail.trim_end_matches('}').parse::<f64>().unwrap()
        })
        .sum();

    let energy = fs::read_to_string(dir.join("energy_summary.csv")).unwrap();
    let total_row = energy.lines().find(|l| l.starts_with("TOTAL")).unwrap();
    let summary_total: f64 = total_row.rsplit(',').next().unwrap().parse().unwrap();
    assert!(
        (trace_total - summary_total).abs() < 1e-9,
        "trace sums to {trace_total}, summary says {summary_total}"
    );
}

#[test]
fn check_passes_and_audits_cycles() {
    let dir = tempdir("check");
    let asm = write(&dir, "p.asm", "PREC 8\nWRITE 0 m:0 0x1234\nWRITE 0 m:1 0x00ff\nMULT 0 m:0,m:1 -> m:2\n");
    let out = run_in(&dir, &["check", asm.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("PASS"), "{text}");
    // WRITE + WRITE + 8-bit MULT = 1 + 1 + 10
    assert!(text.contains("12 cycles"), "{text}");
}

#[test]
fn check_random_corpus_passes() {
    let dir = tempdir("check-random");
    let out = run_in(&dir, &["check", "--random", "25", "--seed", "7", "--prec", "4"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("PASS: 25 random programs"));
}

#[test]
fn bench_writes_the_default_grid() {
    let dir = tempdir("bench");
    let out = run_in(&dir, &["bench"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("10 cycles bit-parallel vs 64 bit-serial (ratio 6.4)"), "{text}");

    let csv = fs::read_to_string(dir.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "arch,N,bl_size,op_count,total_cycles,cycles_per_op");
    assert_eq!(lines.len(), 17, "header + 2 archs x 4 BL sizes x 2 ops");

    // bit-parallel cycles_per_op never rises down the sweep
    for op in ["add", "mult"] {
        let mut last = f64::INFINITY;
        for line in &lines[1..] {
            if line.starts_with(&format!("bit-parallel-{op},")) {
                let cpo: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
                assert!(cpo <= last, "{line}");
                last = cpo;
            }
        }
    }
}

#[test]
fn energy_dump_and_lookup() {
    let dir = tempdir("energy");
    let out = run_in(&dir, &["energy", "--out", "energy.csv"]);
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.join("energy.csv")).unwrap();
    assert_eq!(csv.lines().count(), 16);
    assert!(csv.contains("MULT,8,with,3394.8"));

    let out = run_in(&dir, &["energy", "--op", "SUB", "--prec", "2", "--sep", "without"]);
    assert!(stdout(&out).contains("152.3 fJ"));
}

#[test]
fn config_overrides_flow_through() {
    let dir = tempdir("config");
    let cfg = write(&dir, "model.cfg", "energy.mult.4.with = 900\nbench.bl_sizes = 128,256\n");
    let asm = write(&dir, "p.asm", "PREC 4\nWRITE 0 m:0 0x3\nWRITE 0 m:1 0x5\nMULT 0 m:0,m:1 -> m:2\n");
    let out = run_in(&dir, &["run", asm.to_str().unwrap(), "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let energy = fs::read_to_string(dir.join("energy_summary.csv")).unwrap();
    assert!(energy.contains("MULT,4,with,1,900"), "{energy}");

    let out = run_in(&dir, &["bench", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.join("sweep.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9, "header + 2 archs x 2 BL sizes x 2 ops");
}

#[test]
fn asm_canonicalizes() {
    let dir = tempdir("asm");
    let asm = write(&dir, "p.asm", "PREC 4\n  xor   0   m:1 , m:2   ->   m:3 # comment\n");
    let out = run_in(&dir, &["asm", asm.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "PREC 4\nXOR 0 m:1,m:2 -> m:3\n");
}
