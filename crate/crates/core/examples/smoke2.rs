use agl_core::formula::{Assignment, CnfFormula, Lit};
use agl_core::reduction::{assemble_polygon, certificate_towers};
use agl_core::verifier::{audit_bit_growth, verify_certificate, verify_structure};
use std::time::Instant;

fn main() {
    let phi = CnfFormula::new(
        3,
        vec![
            [Lit::pos(1), Lit::neg(2), Lit::neg(3)],
            [Lit::pos(1), Lit::pos(2), Lit::neg(3)],
        ],
    )
    .unwrap();
    let out = assemble_polygon(&phi).unwrap();
    let t0 = Instant::now();
    let srep = verify_structure(&out);
    println!("structure: passed={} ({} checks) in {:?}", srep.passed, srep.checks.len(), t0.elapsed());
    for c in srep.failures().take(12) {
        println!("  FAIL {} [{}]", c.name, c.witness.clone().unwrap_or_default());
    }
    let arep = audit_bit_growth(&out);
    println!("audit: passed={} ({} checks)", arep.passed, arep.checks.len());
    for c in arep.failures().take(12) {
        println!("  FAIL {} [{}]", c.name, c.witness.clone().unwrap_or_default());
    }
    let alpha = Assignment::from_bits("010", 3).unwrap();
    let cert = certificate_towers(&out, &alpha).unwrap();
    let t1 = Instant::now();
    let crep = verify_certificate(&out, &cert, 500, 42);
    println!("certificate(500): passed={} in {:?}", crep.passed, t1.elapsed());
    if let Some(st) = &crep.sample_stats {
        println!("  samples={} failures={}", st.total_samples, st.failures);
    }
    for c in crep.failures().take(6) {
        println!("  FAIL {} [{}]", c.name, c.witness.clone().unwrap_or_default());
    }
}
