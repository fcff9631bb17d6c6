//! Coordinate bit-growth audit.
//!
//! Re-derives every intersection-built vertex from its defining points and
//! checks the closed-form bound: the output of a two-line intersection needs
//! at most five times the bits of its widest defining point. Also checks the
//! clause-to-clause growth: the last junction's corner needs at most 2m bits
//! more than the first junction's anchor.

use super::{Check, VerificationReport};
use crate::geometry::*;
use crate::reduction::{ReductionOutput, SpikeCase};
use num_traits::Zero;

struct Audit {
    checks: Vec<Check>,
    max_bits: u64,
}

impl Audit {
    fn intersection(&mut self, name: String, result: &Point, defs: [&Point; 4]) {
        let in_bits = defs.iter().map(|p| bit_length_point(p)).max().unwrap();
        let out_bits = bit_length_point(result);
        self.max_bits = self.max_bits.max(out_bits);
        if out_bits <= 5 * in_bits {
            self.checks.push(Check::pass(format!("bits_{name}")));
        } else {
            self.checks.push(Check::fail(
                format!("bits_{name}"),
                format!("{out_bits} bits from {in_bits}-bit inputs"),
            ));
        }
    }
}

pub fn audit_bit_growth(out: &ReductionOutput) -> VerificationReport {
    let g = &out.gadgets;
    let k = &out.params;
    let mut audit = Audit {
        checks: Vec::new(),
        max_bits: 0,
    };

    let w1 = &g.w[0];
    let w2 = &g.w[1];
    let ledge1 = Point::new(Rat::zero(), -k.get(0));
    let ledge2 = Point::new(rat_int(1), -k.get(0));
    let floor1 = Point::new(Rat::zero(), -k.get(3));
    let floor2 = Point::new(rat_int(1), -k.get(3));

    for var in &g.variables {
        let i = var.i;
        // defining anchors of the wall lines
        let a_pt = &var.f[0];
        let wall_a_anchor = if *a_pt == g.w[2] {
            Point::new(Rat::zero(), -k.get(3))
        } else {
            a_pt.clone()
        };
        let b_pt = Point::new(&var.f[0].x + k.get(2), Rat::zero());
        let c_pt = Point::new(&var.f[0].x + rat_int(2) * k.get(2), Rat::zero());
        let d_pt = &var.f[9];
        audit.intersection(
            format!("u{i}_f3"),
            &var.f[2],
            [w2, &wall_a_anchor, &ledge1, &ledge2],
        );
        audit.intersection(
            format!("u{i}_f4"),
            &var.f[3],
            [w2, &wall_a_anchor, &floor1, &floor2],
        );
        audit.intersection(format!("u{i}_f6"), &var.f[5], [w1, &b_pt, &var.f[2], d_pt]);
        audit.intersection(format!("u{i}_f7"), &var.f[6], [w2, &c_pt, &var.f[2], d_pt]);
        audit.intersection(format!("u{i}_f5"), &var.f[4], [w1, &b_pt, &floor1, &floor2]);
        audit.intersection(format!("u{i}_f8"), &var.f[7], [w2, &c_pt, &floor1, &floor2]);
        audit.intersection(format!("u{i}_f9"), &var.f[8], [w1, d_pt, &floor1, &floor2]);
        for (well, spikes, wall_top, wall_bottom) in [
            ("F", &var.spikes_f, &var.f[2], &var.f[3]),
            ("T", &var.spikes_t, &var.f[6], &var.f[7]),
        ] {
            for s in spikes {
                let tag = format!("u{i}_{well}_s{}", s.ordinal);
                audit.intersection(
                    format!("{tag}_mouth_upper"),
                    &s.verts[0],
                    [&s.line_l.0, &s.line_l.1, wall_top, wall_bottom],
                );
                audit.intersection(
                    format!("{tag}_mouth_lower"),
                    &s.verts[3],
                    [&s.line_lstar.0, &s.line_lstar.1, wall_top, wall_bottom],
                );
                // the literal-segment cut comes from the parallel line
                let pent = &g.clauses[s.clause].pentagons[s.slot];
                let from = match s.case {
                    SpikeCase::AtTrueAnchor => &pent.a,
                    SpikeCase::AtFalseAnchor => &pent.x,
                };
                audit.intersection(
                    format!("{tag}_cut"),
                    &s.cut,
                    [&s.line_lstar.0, &s.line_lstar.1, from, &pent.b],
                );
            }
        }
    }

    for cg in &g.clauses {
        let j = cg.j;
        audit.intersection(
            format!("c{j}_xp"),
            &cg.x_prime,
            [&cg.v[0], &cg.v[1], &cg.v[2], &cg.v[3]],
        );
        audit.intersection(
            format!("c{j}_xpp"),
            &cg.x_dprime,
            [&cg.v[1], &cg.v[2], &cg.v[3], &cg.v[4]],
        );
        for (slot, pent) in cg.pentagons.iter().enumerate() {
            let sname = if slot == 3 {
                "p".to_string()
            } else {
                format!("l{}", slot + 1)
            };
            audit.intersection(
                format!("c{j}_{sname}_x"),
                &pent.x,
                [&pent.e, &pent.d, &pent.c, &pent.b],
            );
        }
    }

    // clause-to-clause growth: v_{m,1}.x needs at most 2m more bits than
    // v_{1,4}.x
    let v14_bits = bit_length_rat(&g.clauses[0].v[3].x);
    let vm1_bits = bit_length_rat(&g.clauses[out.m - 1].v[0].x);
    let bound = v14_bits + 2 * out.m as u64;
    audit.checks.push(if vm1_bits <= bound {
        Check::pass("clause_chain_bit_growth")
    } else {
        Check::fail(
            "clause_chain_bit_growth",
            format!("{vm1_bits} bits vs {v14_bits} + 2m"),
        )
    });

    // record the observed maximum over all polygon vertices
    let poly_max = out
        .polygon
        .vertices()
        .iter()
        .map(bit_length_point)
        .max()
        .unwrap_or(1);
    audit.checks.push(Check {
        name: format!("max_vertex_bits_{poly_max}"),
        status: super::CheckStatus::Pass,
        witness: None,
    });

    VerificationReport::new("bit-growth", audit.checks)
}
