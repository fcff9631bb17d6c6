//! Exact structural invariant suite over a constructed instance.

use super::{Check, VerificationReport};
use crate::geometry::*;
use crate::reduction::{ReductionOutput, SpikeCase};
use crate::visibility::{kernel, ConvexRegion};
use num_traits::Zero;

fn collinear(pts: &[&Point]) -> bool {
    if pts.len() < 3 {
        return true;
    }
    pts[2..]
        .iter()
        .all(|p| orientation(pts[0], pts[1], p) == Orientation::Collinear)
}

fn fmt_pt(p: &Point) -> String {
    format!("({}, {})", p.x, p.y)
}

/// Kernel region equals the quadrilateral with exactly these corners.
fn kernel_is_quad(region: &ConvexRegion, quad: [&Point; 4]) -> bool {
    match region {
        ConvexRegion::Polygon(v) => {
            if v.len() != 4 {
                return false;
            }
            // same cyclic vertex set
            quad.iter().all(|q| v.contains(q))
        }
        _ => false,
    }
}

pub fn verify_structure(out: &ReductionOutput) -> VerificationReport {
    let mut checks: Vec<Check> = Vec::new();
    let mut push = |name: String, ok: bool, witness: String| {
        if ok {
            checks.push(Check::pass(name));
        } else {
            checks.push(Check::fail(name, witness));
        }
    };

    let g = &out.gadgets;
    let k = &out.params;
    let n = out.n;
    let m = out.m;

    // global shape and counts
    push(
        "polygon_simple".into(),
        is_simple_ring(out.polygon.vertices()) && out.polygon.signed_area2() > Rat::zero(),
        "ring is not a simple ccw polygon".into(),
    );
    push(
        "vertex_count_formula".into(),
        out.vertex_count == 49 * m + 10 * n + 3 && out.polygon.len() == out.vertex_count,
        format!("{} vs 49m+10n+3 = {}", out.polygon.len(), 49 * m + 10 * n + 3),
    );
    push(
        "tower_bound_formula".into(),
        out.tower_bound == 8 * m + 2 * n + 2,
        format!("{} vs 8m+2n+2", out.tower_bound),
    );

    // chamber corners
    let w1_expect = Point::new(k.get(1), k.get(5));
    let w2_expect = Point::new(Rat::zero(), k.get(4));
    push(
        "w1_coordinates".into(),
        g.w[0] == w1_expect,
        format!("w1 = {}", fmt_pt(&g.w[0])),
    );
    push(
        "w2_coordinates".into(),
        g.w[1] == w2_expect,
        format!("w2 = {}", fmt_pt(&g.w[1])),
    );
    push(
        "w3_at_origin".into(),
        g.w[2] == Point::from_ints(0, 0) && g.w[2] == g.variables[0].f[0],
        format!("w3 = {}", fmt_pt(&g.w[2])),
    );
    push(
        "w4_below_last_v1".into(),
        g.w[3].x == g.clauses[m - 1].v[0].x && g.w[3].y.is_zero(),
        format!("w4 = {}", fmt_pt(&g.w[3])),
    );
    push(
        "w5_equals_last_v1".into(),
        g.w[4] == g.clauses[m - 1].v[0],
        format!("w5 = {}", fmt_pt(&g.w[4])),
    );

    // clause junctions
    for cg in &g.clauses {
        let j = cg.j;
        push(
            format!("c{j}_junction_vertex_count"),
            cg.junction_ring().len() == 25,
            format!("{} vertices", cg.junction_ring().len()),
        );
        // the ten-point top line: v3, a', e', a3, e3, a2, e2, a1, e1, v4
        let p = &cg.pentagons;
        let ten: Vec<&Point> = vec![
            &cg.v[2], &p[3].a, &p[3].e, &p[2].a, &p[2].e, &p[1].a, &p[1].e, &p[0].a, &p[0].e,
            &cg.v[3],
        ];
        push(
            format!("c{j}_top_line_collinear"),
            collinear(&ten),
            "top-line anchors not collinear".into(),
        );
        // v4 placement rule
        if j == 1 {
            let expect =
                rat_int(2) * k.get(2) * (rat_int(4) * rat_int(n as i64) - rat_int(1));
            push(
                format!("c1_v4_position"),
                cg.v[3].x == expect && cg.v[3].y == k.get(6),
                format!("v4 = {}", fmt_pt(&cg.v[3])),
            );
        } else {
            let prev = &g.clauses[j - 2];
            push(
                format!("c{j}_v4_doubling"),
                cg.v[3].x == rat_int(2) * &prev.v[0].x && cg.v[3].y == k.get(6),
                format!("v4 = {}", fmt_pt(&cg.v[3])),
            );
        }
        for (slot, pent) in cg.pentagons.iter().enumerate() {
            let sname = if slot == 3 {
                "p".to_string()
            } else {
                format!("l{}", slot + 1)
            };
            push(
                format!("c{j}_{sname}_adc_collinear"),
                orientation(&pent.a, &pent.d, &pent.c) == Orientation::Collinear,
                format!("a={} d={} c={}", fmt_pt(&pent.a), fmt_pt(&pent.d), fmt_pt(&pent.c)),
            );
            let on_ed = Line::through(&pent.e, &pent.d).contains(&pent.x);
            let on_cb = point_on_segment(&pent.x, &pent.c, &pent.b)
                && pent.x != pent.c
                && pent.x != pent.b;
            push(
                format!("c{j}_{sname}_x_derivation"),
                on_ed && on_cb,
                format!("x = {}", fmt_pt(&pent.x)),
            );
            match SimplePolygon::new(pent.ring()) {
                Ok(sub) => {
                    let kern = kernel(&sub);
                    push(
                        format!("c{j}_{sname}_star_shaped"),
                        kern.region.dimension() == 2,
                        format!("kernel {:?}", kern.region),
                    );
                    push(
                        format!("c{j}_{sname}_kernel_quad"),
                        kernel_is_quad(&kern.region, [&pent.a, &pent.b, &pent.x, &pent.d]),
                        format!("kernel {:?}", kern.region),
                    );
                }
                Err(e) => push(
                    format!("c{j}_{sname}_star_shaped"),
                    false,
                    format!("pentagon ring: {e}"),
                ),
            }
        }
        // inner pentagon kernel = {v2, x', v4, x''}
        match SimplePolygon::new(cg.star_ring()) {
            Ok(star) => {
                let kern = kernel(&star);
                push(
                    format!("c{j}_star_kernel_quad"),
                    kernel_is_quad(
                        &kern.region,
                        [&cg.v[1], &cg.x_prime, &cg.v[3], &cg.x_dprime],
                    ),
                    format!("kernel {:?}", kern.region),
                );
            }
            Err(e) => push(format!("c{j}_star_kernel_quad"), false, format!("{e}")),
        }
        let xp_ok = {
            let top = Line::through(&cg.v[3], &cg.v[2]);
            let l12 = Line::through(&cg.v[0], &cg.v[1]);
            line_intersection(&l12, &top) == LineIntersection::At(cg.x_prime.clone())
                && point_on_segment(&cg.x_prime, &cg.pentagons[3].a, &cg.v[2])
        };
        push(
            format!("c{j}_xp_incidence"),
            xp_ok,
            format!("x' = {}", fmt_pt(&cg.x_prime)),
        );
        let xpp_ok = {
            let l23 = Line::through(&cg.v[1], &cg.v[2]);
            let wall = Line::through(&cg.v[3], &cg.v[4]);
            line_intersection(&l23, &wall) == LineIntersection::At(cg.x_dprime.clone())
                && point_on_segment(&cg.x_dprime, &cg.v[3], &cg.v[4])
        };
        push(
            format!("c{j}_xpp_incidence"),
            xpp_ok,
            format!("x'' = {}", fmt_pt(&cg.x_dprime)),
        );
        push(
            format!("c{j}_anchors_on_kernel_stretch"),
            cg.pentagons
                .iter()
                .all(|p| point_on_segment(&p.a, &cg.x_prime, &cg.v[3])),
            "an a-anchor misses the x'-v4 stretch".into(),
        );
    }

    // clause placement witnesses
    {
        let c1 = &g.clauses[0];
        let z = line_intersection(
            &Line::through(&c1.pentagons[0].a, &c1.pentagons[0].b),
            &Line::through(&g.w[2], &g.w[3]),
        );
        let ok = match z {
            LineIntersection::At(zp) => zp.x >= g.variables[n - 1].f[9].x,
            _ => false,
        };
        push(
            "c1_z_right_of_patterns".into(),
            ok,
            "literal wall line lands left of the last pattern".into(),
        );
        for j in 2..=m {
            let prev_v1 = &g.clauses[j - 2].v[0];
            let h = line_intersection(
                &Line::through(&g.w[2], prev_v1),
                &Line::through(
                    &Point::new(Rat::zero(), k.get(6)),
                    &Point::new(rat_int(1), k.get(6)),
                ),
            );
            let ok = match h {
                LineIntersection::At(hp) => g.clauses[j - 1].v[3].x >= hp.x,
                _ => false,
            };
            push(format!("c{j}_doubling_past_h"), ok, "v4 left of h".into());
        }
    }

    // variable patterns
    for var in &g.variables {
        let i = var.i;
        push(
            format!("u{i}_floor_collinear"),
            collinear(&[&var.f[2], &var.f[5], &var.f[6], &var.f[9]]),
            "f3, f6, f7, f10 not collinear".into(),
        );
        push(
            format!("u{i}_left_walls_through_w2"),
            Line::through(&var.f[2], &var.f[3]).contains(&g.w[1])
                && Line::through(&var.f[6], &var.f[7]).contains(&g.w[1]),
            "a left wall misses w2".into(),
        );
        push(
            format!("u{i}_right_walls_through_w1"),
            Line::through(&var.f[4], &var.f[5]).contains(&g.w[0])
                && Line::through(&var.f[8], &var.f[9]).contains(&g.w[0]),
            "a right wall misses w1".into(),
        );
        push(
            format!("u{i}_depths"),
            var.f[2].y == -k.get(0)
                && [3usize, 4, 7, 8].iter().all(|&r| var.f[r].y == -k.get(3))
                && var.f[0].y.is_zero()
                && var.f[9].y.is_zero(),
            "ledge or floor depth off".into(),
        );
        let a_expect = rat_int(4) * k.get(2) * rat_int((i - 1) as i64);
        push(
            format!("u{i}_pitch"),
            var.f[0].x == a_expect && var.f[9].x == &a_expect + rat_int(3) * k.get(2),
            format!("f1 = {}", fmt_pt(&var.f[0])),
        );
        push(
            format!("u{i}_x2_rotation_variant"),
            var.x2 == var.f[9] && var.x1 == Point::new(&a_expect + k.get(2), Rat::zero()),
            "derived ceiling anchors off".into(),
        );
        for (well, spikes, apex, fp, fpp) in [
            ("F", &var.spikes_f, &var.f[5], &var.f_prime_f, &var.f_dprime_f),
            ("T", &var.spikes_t, &var.f[9], &var.f_prime_t, &var.f_dprime_t),
        ] {
            push(
                format!("u{i}_{well}_spike_count"),
                !spikes.is_empty() && spikes.len() <= m,
                format!("{} spikes", spikes.len()),
            );
            push(
                format!("u{i}_{well}_fpp_midpoint"),
                rat_int(2) * &fpp.x == &fp.x + &apex.x && rat_int(2) * &fpp.y == &fp.y + &apex.y,
                "f'' is not the midpoint of f' and the apex".into(),
            );
            let (wall_top, wall_bottom) = if well == "F" {
                (&var.f[2], &var.f[3])
            } else {
                (&var.f[6], &var.f[7])
            };
            for s in spikes {
                let tag = format!("u{i}_{well}_s{}", s.ordinal);
                let l = Line::through(&s.line_l.0, &s.line_l.1);
                let ls = Line::through(&s.line_lstar.0, &s.line_lstar.1);
                // declared anchor incidences per case
                let anchored = match s.case {
                    SpikeCase::AtTrueAnchor => {
                        l.contains(apex) && ls.contains(&s.designated)
                    }
                    SpikeCase::AtFalseAnchor => {
                        l.contains(&s.designated) && ls.contains(apex)
                    }
                };
                push(
                    format!("{tag}_line_anchors"),
                    anchored,
                    "strip line misses its declared anchors".into(),
                );
                // vertices on their lines, mouths on the wall segment
                let upper_on = l.contains(&s.verts[0]) && l.contains(&s.verts[1])
                    || ls.contains(&s.verts[0]) && ls.contains(&s.verts[1]);
                let lower_on = l.contains(&s.verts[2]) && l.contains(&s.verts[3])
                    || ls.contains(&s.verts[2]) && ls.contains(&s.verts[3]);
                push(
                    format!("{tag}_verts_on_lines"),
                    upper_on && lower_on,
                    "spike vertices off their strip lines".into(),
                );
                push(
                    format!("{tag}_mouth_on_wall"),
                    point_on_segment(&s.verts[0], wall_top, wall_bottom)
                        && point_on_segment(&s.verts[3], wall_top, wall_bottom)
                        && s.verts[0] != *wall_top
                        && s.verts[3] != *wall_bottom,
                    "mouth leaves the wall segment".into(),
                );
                push(
                    format!("{tag}_cut_on_tower_segment"),
                    {
                        let pent = &g.clauses[s.clause].pentagons[s.slot];
                        let from = match s.case {
                            SpikeCase::AtTrueAnchor => &pent.a,
                            SpikeCase::AtFalseAnchor => &pent.x,
                        };
                        ls.contains(&s.cut)
                            && point_on_segment(&s.cut, from, &pent.b)
                            && s.cut != *from
                            && s.cut != pent.b
                    },
                    "strip cut misses the literal tower segment".into(),
                );
            }
            // strips pairwise disjoint beyond the wall
            let mut disjoint = true;
            for s1 in 0..spikes.len() {
                for s2 in s1 + 1..spikes.len() {
                    for e1 in 0..4 {
                        for e2 in 0..4 {
                            let (a1, b1) =
                                (&spikes[s1].verts[e1], &spikes[s1].verts[(e1 + 1) % 4]);
                            let (a2, b2) =
                                (&spikes[s2].verts[e2], &spikes[s2].verts[(e2 + 1) % 4]);
                            if segments_touch(a1, b1, a2, b2) {
                                disjoint = false;
                            }
                        }
                    }
                }
            }
            push(
                format!("u{i}_{well}_strips_disjoint"),
                disjoint,
                "spike quads touch".into(),
            );
        }
        // per-pattern vertex budget: 10 + 8 * occurrences
        push(
            format!("u{i}_vertex_budget"),
            var.pattern_ring().len() == 10 + 4 * (var.spikes_f.len() + var.spikes_t.len())
                && var.spikes_f.len() == var.spikes_t.len(),
            format!("{} ring vertices", var.pattern_ring().len()),
        );
        // the two well-side kernels are disjoint convex regions
        let kf = SimplePolygon::new(var.left_ring()).map(|p| kernel(&p).region);
        let kt = SimplePolygon::new(var.right_ring()).map(|p| kernel(&p).region);
        match (kf, kt) {
            (Ok(kf), Ok(kt)) => {
                push(
                    format!("u{i}_wellF_kernel_at_apex"),
                    kf.contains(&var.f[5]),
                    "first-well apex outside its kernel".into(),
                );
                push(
                    format!("u{i}_wellT_kernel_at_apex"),
                    kt.contains(&var.f[9]),
                    "second-well apex outside its kernel".into(),
                );
                push(
                    format!("u{i}_well_kernels_disjoint"),
                    kf.intersect(&kt).is_empty(),
                    "the two well kernels intersect".into(),
                );
            }
            (e1, e2) => push(
                format!("u{i}_well_kernels_disjoint"),
                false,
                format!("subpolygon rings invalid: {:?} {:?}", e1.err(), e2.err()),
            ),
        }
    }

    // spike total across the polygon: 24 per clause
    let spike_vertices: usize = g
        .variables
        .iter()
        .map(|v| 4 * (v.spikes_f.len() + v.spikes_t.len()))
        .sum();
    let mut checks2 = checks;
    checks2.push(if spike_vertices == 24 * m {
        Check::pass("spike_vertex_total")
    } else {
        Check::fail(
            "spike_vertex_total",
            format!("{spike_vertices} vs 24m = {}", 24 * m),
        )
    });

    VerificationReport::new("structure", checks2)
}
