//! Round-trip property of the assembler over a seeded random corpus:
//! reassembling a program's canonical disassembly reproduces it exactly.

use rand::rngs::StdRng;
use rand::SeedableRng;

use imcsim::config::MacroConfig;
use imcsim::corpus::random_program;
use imcsim_cli::asm::{assemble, disassemble};

#[test]
fn fifty_program_corpus_round_trips() {
    let cfg = MacroConfig::default();
    for seed in 0..50u64 {
        let mut rng = StdRng::seed_from_u64(seed);
        let precision = [2usize, 4, 8][seed as usize % 3];
        let program = random_program(&cfg, precision, 10, &mut rng);
        let text = disassemble(&program);
        let reassembled = assemble(&text, &cfg).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"));
        assert_eq!(reassembled, program, "seed {seed}");
        // and the canonical form is a fixed point
        assert_eq!(disassemble(&reassembled), text, "seed {seed}");
    }
}

#[test]
fn accepted_programs_never_hit_address_errors_at_run_time() {
    let cfg = MacroConfig { banks: 2, rows_per_bank: 8, cols_per_bank: 32, ..MacroConfig::default() };
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..10 {
        let program = random_program(&cfg, 4, 8, &mut rng);
        let text = disassemble(&program);
        let parsed = assemble(&text, &cfg).unwrap();
        let mut sim = imcsim::Simulator::with_macro(cfg).unwrap();
        sim.run_program(&parsed).unwrap();
    }
}
