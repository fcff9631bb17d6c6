//! The gadget construction. Coordinates follow a fixed global frame:
//! the chamber floor is the x-axis (variable patterns hang below it), the
//! junction line is y = k5 (clause junctions rise above it), and the chamber
//! corners sit at w3 = (0,0), w2 = (0,k4), w1 = (k1,k5), w4/w5 on the far
//! right. All derived vertices come from the closed-form line intersection,
//! and every placement rule is re-checked exactly before the ring is sealed.

use super::gadgets::*;
use super::{BuildError, Certificate, GadgetIndex, KSequence, ReductionOutput};
use crate::formula::{Assignment, CnfFormula};
use crate::geometry::*;
use crate::trilateration::{Tower, TowerSet};
use crate::visibility::ConvexRegion;
use num_traits::Zero;

/// Literal pentagon template, local to its `a` vertex with the top line
/// horizontal. The vertices a, d, c are collinear (edge cd lies on the line
/// through a), the extension of edge ed crosses segment cb at the derived
/// point x, and the kernel is the quadrilateral a, b, x, d.
const PENT_B: (i64, i64, i64, i64) = (0, 1, 1, 1);
const PENT_C: (i64, i64, i64, i64) = (-12, 1, 1, 2);
const PENT_D: (i64, i64, i64, i64) = (-10, 1, 5, 12);
const PENT_E: (i64, i64, i64, i64) = (-16, 1, 0, 1);
const PENT_X: (i64, i64, i64, i64) = (-4, 1, 5, 6);

/// Pentagon `a` offsets along the junction top line, local to v4.
const PENT_OFFSETS: [i64; 4] = [18, 38, 58, 78];
/// Top line right end (v3) offset from v4.
const V3_OFFSET: i64 = 86;
/// Reflex corner x offset from v4.
const V2_X_OFFSET: i64 = 84;
/// Bottom right corner offset from v4.
const V1_OFFSET: i64 = 90;

struct Ctx {
    k: [Rat; 7],
    w1: Point,
    w2: Point,
    w3: Point,
}

fn check(cond: bool, name: impl Fn() -> String) -> Result<(), BuildError> {
    if cond {
        Ok(())
    } else {
        Err(BuildError::Check(name()))
    }
}

fn isect(name: &str, l1: &Line, l2: &Line) -> Result<Point, BuildError> {
    match line_intersection(l1, l2) {
        LineIntersection::At(p) => Ok(p),
        other => Err(BuildError::Check(format!(
            "{name}: expected a proper line intersection, got {other:?}"
        ))),
    }
}

fn pt_local(a: &Point, t: (i64, i64, i64, i64)) -> Point {
    Point::new(&a.x + rat(t.0, t.1), &a.y + rat(t.2, t.3))
}

/// Strictly-inside test for a point known to be collinear with the segment.
fn strictly_within(p: &Point, a: &Point, b: &Point) -> bool {
    point_on_segment(p, a, b) && p != a && p != b
}

pub fn build_with_scale(phi: &CnfFormula, kseq: &KSequence) -> Result<ReductionOutput, BuildError> {
    let n = phi.n;
    let m = phi.m();
    let k: [Rat; 7] = core::array::from_fn(|i| kseq.get(i));
    let ctx = Ctx {
        w1: Point::new(k[1].clone(), k[5].clone()),
        w2: Point::new(Rat::zero(), k[4].clone()),
        w3: Point::new(Rat::zero(), Rat::zero()),
        k,
    };

    // -- variable patterns ---------------------------------------------
    let mut vars: Vec<VarSkeleton> = Vec::with_capacity(n);
    for i in 1..=n {
        vars.push(build_variable_skeleton(&ctx, i, vars.last())?);
    }

    // -- clause junction placement --------------------------------------
    // v4 x-positions: first clause at twice the last pattern's right end,
    // then doubling the previous junction's right corner.
    let four = rat_int(4);
    let f_n10_x = &ctx.k[2] * (&four * rat_int(n as i64) - rat_int(1));
    let mut v4x: Vec<Rat> = Vec::with_capacity(m);
    for j in 0..m {
        if j == 0 {
            v4x.push(rat_int(2) * &f_n10_x);
        } else {
            let prev_v1 = &v4x[j - 1] + rat_int(V1_OFFSET);
            v4x.push(rat_int(2) * prev_v1);
        }
    }

    // admissible opening left ends, one per clause
    let targets = pattern_sight_targets(&vars);
    let mut v5x: Vec<Rat> = Vec::with_capacity(m);
    for j in 0..m {
        let lo = if j == 0 {
            &ctx.k[1] + &ctx.k[2]
        } else {
            &v4x[j - 1] + rat_int(V1_OFFSET) + &ctx.k[2]
        };
        let hi = junction_opening_bound(&ctx, &v4x[j], &targets)? - &ctx.k[2];
        check(lo < hi, || {
            format!("clause{}_v5_interval: empty admissible interval", j + 1)
        })?;
        v5x.push((lo + hi) / rat_int(2));
    }

    // reflex corner drop: the line from v3 through v2 must exit through the
    // left wall of every junction, so its slope scales with the widest one
    let h_height = &ctx.k[6] - &ctx.k[5];
    let s_max = (0..m)
        .map(|j| &v4x[j] - &v5x[j])
        .max()
        .expect("at least one clause");
    let sigma = &h_height / (rat_int(2) * (s_max + rat_int(V3_OFFSET)));

    let mut clauses: Vec<ClauseGadget> = Vec::with_capacity(m);
    for j in 0..m {
        clauses.push(build_clause_junction(&ctx, j + 1, &v4x[j], &v5x[j], &sigma)?);
    }

    // -- spikes ----------------------------------------------------------
    // Designated points shrink geometrically on retry until all strips are
    // disjoint and cut the prescribed segments.
    let mut built_vars: Option<Vec<VariableGadget>> = None;
    let mut last_err = BuildError::Check("spike construction not attempted".into());
    for round in 0..7 {
        match build_all_spikes(&ctx, phi, &vars, &clauses, round) {
            Ok(vs) => {
                built_vars = Some(vs);
                break;
            }
            Err(e @ BuildError::Check(_)) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    let variables = built_vars.ok_or(last_err)?;

    // -- chamber corners and assembly ------------------------------------
    let w4 = Point::new(&v4x[m - 1] + rat_int(V1_OFFSET), Rat::zero());
    let w5 = Point::new(w4.x.clone(), ctx.k[5].clone());
    check(w5 == clauses[m - 1].v[0], || {
        "w5_equals_last_v1".to_string()
    })?;
    let gadgets = Gadgets {
        w: [ctx.w1.clone(), ctx.w2.clone(), ctx.w3.clone(), w4, w5],
        clauses,
        variables,
    };

    seal(phi, kseq, &ctx, gadgets)
}

/// Exact positions of one variable pattern, before spikes.
struct VarSkeleton {
    i: usize,
    /// pitch anchors on the axis: f1.x, x1.x, the second-well left anchor,
    /// and f10.x
    ax: [Rat; 4],
    f: [Point; 10],
    x1: Point,

}

fn build_variable_skeleton(
    ctx: &Ctx,
    i: usize,
    prev: Option<&VarSkeleton>,
) -> Result<VarSkeleton, BuildError> {
    let k = &ctx.k;
    let a_x = rat_int(4) * &k[2] * rat_int((i - 1) as i64);
    let ax: [Rat; 4] = [
        a_x.clone(),
        &a_x + &k[2],
        &a_x + rat_int(2) * &k[2],
        &a_x + rat_int(3) * &k[2],
    ];
    let f1 = Point::new(ax[0].clone(), Rat::zero());
    let f10 = Point::new(ax[3].clone(), Rat::zero());
    let depth_ledge = Point::new(Rat::zero(), -k[0].clone());
    let depth_ledge2 = Point::new(rat_int(1), -k[0].clone());
    let depth_floor = Point::new(Rat::zero(), -k[3].clone());
    let depth_floor2 = Point::new(rat_int(1), -k[3].clone());
    let ledge_line = Line::through(&depth_ledge, &depth_ledge2);
    let floor_line = Line::through(&depth_floor, &depth_floor2);

    // the left walls aim at w2, the right walls at w1
    let wall_a = if f1 == ctx.w3 {
        Line::through(&ctx.w2, &Point::new(Rat::zero(), -k[3].clone()))
    } else {
        Line::through(&ctx.w2, &f1)
    };
    let anchor_b = Point::new(ax[1].clone(), Rat::zero());
    let anchor_c = Point::new(ax[2].clone(), Rat::zero());
    let wall_b = Line::through(&ctx.w1, &anchor_b);
    let wall_c = Line::through(&ctx.w2, &anchor_c);
    let wall_d = Line::through(&ctx.w1, &f10);

    let f3 = isect(&format!("u{i}.f3"), &wall_a, &ledge_line)?;
    let f4 = isect(&format!("u{i}.f4"), &wall_a, &floor_line)?;
    let slope = Line::through(&f3, &f10);
    let f6 = isect(&format!("u{i}.f6"), &wall_b, &slope)?;
    let f7 = isect(&format!("u{i}.f7"), &wall_c, &slope)?;
    let f5 = isect(&format!("u{i}.f5"), &wall_b, &floor_line)?;
    let f8 = isect(&format!("u{i}.f8"), &wall_c, &floor_line)?;
    let f9 = isect(&format!("u{i}.f9"), &wall_d, &floor_line)?;
    let x1 = anchor_b.clone();

    // f2 needs no precise construction; park it between the neighbouring
    // wall lines at ledge depth
    let f2 = if let Some(p) = prev {
        let prev_wall_at_ledge = isect(
            &format!("u{i}.f2.prev_wall"),
            &Line::through(&ctx.w1, &Point::new(p.ax[3].clone(), Rat::zero())),
            &ledge_line,
        )?;
        check(prev_wall_at_ledge.x < f3.x, || {
            format!("pattern{i}_interpattern_gap: previous wall reaches past f3 at ledge depth")
        })?;
        Point::new((&prev_wall_at_ledge.x + &f3.x) / rat_int(2), -k[0].clone())
    } else {
        Point::new(-k[0].clone(), -k[0].clone())
    };

    // exact ordering along the sloped floor and the well bottoms
    let quarter = &k[2] / rat_int(4);
    check(&f3.x + &quarter < f6.x, || {
        format!("pattern{i}_mouth_order: first well mouth too narrow")
    })?;
    check(&f6.x + &quarter < f7.x, || {
        format!("pattern{i}_bridge_order: bridge between wells too narrow")
    })?;
    check(&f7.x + &quarter < f10.x, || {
        format!("pattern{i}_mouth2_order: second well mouth too narrow")
    })?;
    check(f4.x < f5.x && f5.x < f8.x && f8.x < f9.x, || {
        format!("pattern{i}_bottom_order: well bottoms out of order")
    })?;
    if let Some(p) = prev {
        let prev_wall_floor = isect(
            &format!("u{i}.prev_wall_floor"),
            &Line::through(&ctx.w1, &Point::new(p.ax[3].clone(), Rat::zero())),
            &floor_line,
        )?;
        check(prev_wall_floor.x < f4.x, || {
            format!("pattern{i}_interpattern_gap: walls cross at floor depth")
        })?;
    }
    // chamber corners must reach every deep corner through the ceiling
    // opening (f1.x, f10.x)
    for (w, corner, tag) in [
        (&ctx.w2, &f5, "w2_sees_f5"),
        (&ctx.w2, &f9, "w2_sees_f9"),
        (&ctx.w2, &f6, "w2_sees_f6"),
        (&ctx.w1, &f4, "w1_sees_f4"),
        (&ctx.w1, &f8, "w1_sees_f8"),
        (&ctx.w1, &f3, "w1_sees_f3"),
    ] {
        let t = &w.y / (&w.y - &corner.y);
        let cross_x = &w.x + &t * (&corner.x - &w.x);
        check(ax[0] < cross_x && cross_x < ax[3], || {
            format!("pattern{i}_{tag}: ceiling crossing misses the opening")
        })?;
    }

    let f = [f1, f2, f3, f4, f5, f6, f7, f8, f9, f10];
    Ok(VarSkeleton {
        i,
        ax,
        f,
        x1,

    })
}

/// Sight targets the literal towers must reach through a junction opening.
fn pattern_sight_targets(vars: &[VarSkeleton]) -> Vec<Point> {
    let mut t = Vec::new();
    for v in vars {
        t.push(v.f[0].clone());
        t.push(v.f[2].clone());
        t.push(v.f[3].clone());
        t.push(v.f[5].clone());
        t.push(v.f[6].clone());
        t.push(v.f[9].clone());
    }
    t
}

/// Leftmost admissible opening coordinate: the minimum over all sight lines
/// from the junction's tower anchors to the pattern targets of the crossing
/// with the junction line.
fn junction_opening_bound(ctx: &Ctx, v4x: &Rat, targets: &[Point]) -> Result<Rat, BuildError> {
    let k5 = &ctx.k[5];
    let k6 = &ctx.k[6];
    let mut anchors: Vec<Point> = Vec::new();
    for off in PENT_OFFSETS {
        let a = Point::new(v4x + rat_int(off), k6.clone());
        anchors.push(pt_local(&a, PENT_B));
        anchors.push(pt_local(&a, PENT_X));
        anchors.push(a);
    }
    let mut best: Option<Rat> = None;
    for a in &anchors {
        for t in targets {
            // crossing of segment a -> t with y = k5 (a.y > k5 >= 0 >= t.y)
            let s = (&a.y - k5) / (&a.y - &t.y);
            let x = &a.x + &s * (&t.x - &a.x);
            if best.as_ref().map_or(true, |b| x < *b) {
                best = Some(x);
            }
        }
    }
    best.ok_or_else(|| BuildError::Check("opening_bound: no anchors".into()))
}

fn build_clause_junction(
    ctx: &Ctx,
    j: usize,
    v4x: &Rat,
    v5x: &Rat,
    sigma: &Rat,
) -> Result<ClauseGadget, BuildError> {
    let k5 = &ctx.k[5];
    let k6 = &ctx.k[6];
    let v4 = Point::new(v4x.clone(), k6.clone());
    let v3 = Point::new(v4x + rat_int(V3_OFFSET), k6.clone());
    let v1 = Point::new(v4x + rat_int(V1_OFFSET), k5.clone());
    let v5 = Point::new(v5x.clone(), k5.clone());
    let drop = rat_int(2) * sigma;
    let v2 = Point::new(v4x + rat_int(V2_X_OFFSET), k6 - &drop);

    let mut pentagons = Vec::with_capacity(4);
    for off in PENT_OFFSETS {
        let a = Point::new(v4x + rat_int(off), k6.clone());
        let pent = PentagonGadget {
            b: pt_local(&a, PENT_B),
            c: pt_local(&a, PENT_C),
            d: pt_local(&a, PENT_D),
            e: pt_local(&a, PENT_E),
            x: pt_local(&a, PENT_X),
            a,
        };
        // template sanity, exact
        check(
            orientation(&pent.a, &pent.d, &pent.c) == Orientation::Collinear,
            || format!("clause{j}_literal_adc_collinear"),
        )?;
        check(
            Line::through(&pent.e, &pent.d).contains(&pent.x)
                && strictly_within(&pent.x, &pent.c, &pent.b),
            || format!("clause{j}_literal_x_on_cb"),
        )?;
        pentagons.push(pent);
    }

    // derived kernel corners of the inner pentagon
    let top = Line::through(&v4, &v3);
    let x_prime = isect(&format!("c{j}.xp"), &Line::through(&v1, &v2), &top)?;
    let x_dprime = isect(
        &format!("c{j}.xpp"),
        &Line::through(&v2, &v3),
        &Line::through(&v4, &v5),
    )?;
    check(strictly_within(&x_prime, &pentagons[3].a, &v3), || {
        format!("clause{j}_xp_in_segment: kernel corner off the a'-v3 stretch")
    })?;
    check(strictly_within(&x_dprime, &v4, &v5), || {
        format!("clause{j}_xpp_on_wall: kernel corner off the v4-v5 wall")
    })?;
    for p in &pentagons {
        check(strictly_within(&p.a, &x_prime, &v4), || {
            format!("clause{j}_anchors_in_kernel_stretch")
        })?;
    }

    Ok(ClauseGadget {
        j,
        v: [v1, v2, v3, v4, v5],
        pentagons: [
            pentagons[0].clone(),
            pentagons[1].clone(),
            pentagons[2].clone(),
            pentagons[3].clone(),
        ],
        x_prime,
        x_dprime,
    })
}

struct WellFrame<'a> {
    var: &'a VarSkeleton,
    well_t: bool,
    apex: Point,
    wall: Line,
    wall_top: Point,
    wall_bottom: Point,
    far_line: Line,
}

fn well_frame<'a>(ctx: &Ctx, var: &'a VarSkeleton, well_t: bool) -> WellFrame<'a> {
    if well_t {
        WellFrame {
            var,
            well_t,
            apex: var.f[9].clone(),
            wall: Line::through(&ctx.w2, &Point::new(var.ax[2].clone(), Rat::zero())),
            wall_top: var.f[6].clone(),
            wall_bottom: var.f[7].clone(),
            far_line: Line::through(&ctx.w1, &Point::new(var.ax[1].clone(), Rat::zero())),
        }
    } else {
        let far_line = if var.i == 1 {
            Line::through(
                &Point::new(-ctx.k[2].clone(), Rat::zero()),
                &Point::new(-ctx.k[2].clone(), rat_int(-1)),
            )
        } else {
            let prev_d = &var.ax[0] - &ctx.k[2];
            Line::through(&ctx.w1, &Point::new(prev_d, Rat::zero()))
        };
        let wall = if var.f[0] == ctx.w3 {
            Line::through(&ctx.w2, &Point::new(Rat::zero(), -ctx.k[3].clone()))
        } else {
            Line::through(&ctx.w2, &var.f[0])
        };
        WellFrame {
            var,
            well_t,
            apex: var.f[5].clone(),
            wall,
            wall_top: var.f[2].clone(),
            wall_bottom: var.f[3].clone(),
            far_line,
        }
    }
}

/// Pre-rotation line arrangement of the spike construction, plus the
/// triangle edge lines.
fn arrangement_lines(
    phi: &CnfFormula,
    vars: &[VarSkeleton],
    clauses: &[ClauseGadget],
) -> Vec<Line> {
    let mut lines = Vec::new();
    for v in vars {
        for (j, q, positive) in phi.occurrences(v.i) {
            let pent = &clauses[j].pentagons[q];
            let (t_anchor, f_anchor) = if positive {
                (&pent.x, &pent.a)
            } else {
                (&pent.a, &pent.x)
            };
            lines.push(Line::through(t_anchor, &v.f[9]));
            lines.push(Line::through(f_anchor, &v.f[5]));
        }
        lines.push(Line::through(&v.f[0], &v.f[1]));
    }
    lines
}

/// First hit along the ray from `from` toward w1 over arrangement lines not
/// passing through `from`.
fn first_arrangement_hit(
    ctx: &Ctx,
    lines: &[Line],
    from: &Point,
    tag: &str,
) -> Result<Point, BuildError> {
    let dirx = &ctx.w1.x - &from.x;
    let diry = &ctx.w1.y - &from.y;
    let ray = Line::through(from, &ctx.w1);
    let mut best: Option<Rat> = None;
    for l in lines {
        if l.contains(from) {
            continue;
        }
        if let LineIntersection::At(p) = line_intersection(&ray, l) {
            let t = if !dirx.is_zero() {
                (&p.x - &from.x) / &dirx
            } else {
                (&p.y - &from.y) / &diry
            };
            if t > Rat::zero() && best.as_ref().map_or(true, |b| t < *b) {
                best = Some(t);
            }
        }
    }
    let t = best.ok_or_else(|| BuildError::Check(format!("{tag}: apex ray hits no line")))?;
    Ok(Point::new(&from.x + &t * &dirx, &from.y + &t * &diry))
}

fn build_all_spikes(
    ctx: &Ctx,
    phi: &CnfFormula,
    vars: &[VarSkeleton],
    clauses: &[ClauseGadget],
    round: u32,
) -> Result<Vec<VariableGadget>, BuildError> {
    let lines = arrangement_lines(phi, vars, clauses);
    let m = phi.m();
    let mut out = Vec::with_capacity(vars.len());
    for var in vars {
        let occ = phi.occurrences(var.i);
        if occ.is_empty() {
            return Err(BuildError::Formula(format!(
                "variable u{} has no occurrences",
                var.i
            )));
        }
        let mut wells: Vec<(Vec<Spike>, Point, Point)> = Vec::new();
        for well_t in [false, true] {
            let frame = well_frame(ctx, var, well_t);
            let f_prime = first_arrangement_hit(
                ctx,
                &lines,
                &frame.apex,
                &format!("u{}.{}", var.i, if well_t { "T" } else { "F" }),
            )?;
            let f_dprime = f_prime.midpoint(&frame.apex);
            let mut spikes = Vec::with_capacity(occ.len());
            for (ord, (j, q, positive)) in occ.iter().enumerate() {
                let pent = &clauses[*j].pentagons[*q];
                // the strip aims at the anchor whose towers must cover it
                let is_true_anchor = well_t != *positive;
                let tau = Rat::new(
                    num_bigint::BigInt::from(ord as i64 + 1),
                    num_bigint::BigInt::from((m as i64 + 1) << round),
                );
                let designated = frame.apex.lerp(&f_dprime, &tau);
                let spike = build_spike(
                    &frame,
                    pent,
                    *j,
                    *q,
                    is_true_anchor,
                    ord + 1,
                    designated,
                )?;
                spikes.push(spike);
            }
            // wall order: mouths strictly descending, disjoint quads
            spikes.sort_by(|a, b| b.verts[0].y.cmp(&a.verts[0].y));
            for w in spikes.windows(2) {
                check(w[0].verts[3].y > w[1].verts[0].y, || {
                    format!(
                        "u{}_spike_mouths_disjoint: strips overlap on the wall",
                        var.i
                    )
                })?;
            }
            for i1 in 0..spikes.len() {
                for i2 in i1 + 1..spikes.len() {
                    for e1 in 0..4 {
                        for e2 in 0..4 {
                            let (a1, b1) =
                                (&spikes[i1].verts[e1], &spikes[i1].verts[(e1 + 1) % 4]);
                            let (a2, b2) =
                                (&spikes[i2].verts[e2], &spikes[i2].verts[(e2 + 1) % 4]);
                            check(!segments_touch(a1, b1, a2, b2), || {
                                format!("u{}_spike_quads_disjoint", var.i)
                            })?;
                        }
                    }
                }
            }
            wells.push((spikes, f_prime, f_dprime));
        }
        let (spikes_t, f_prime_t, f_dprime_t) = wells.pop().unwrap();
        let (spikes_f, f_prime_f, f_dprime_f) = wells.pop().unwrap();
        out.push(VariableGadget {
            i: var.i,
            f: var.f.clone(),
            x1: var.x1.clone(),
            x2: var.f[9].clone(),
            f_prime_f,
            f_dprime_f,
            f_prime_t,
            f_dprime_t,
            spikes_f,
            spikes_t,
        });
    }
    Ok(out)
}

fn build_spike(
    frame: &WellFrame<'_>,
    pent: &PentagonGadget,
    clause: usize,
    slot: usize,
    is_true_anchor: bool,
    ordinal: usize,
    designated: Point,
) -> Result<Spike, BuildError> {
    let i = frame.var.i;
    let well = if frame.well_t { "T" } else { "F" };
    let tag = format!("u{i}.{well}.s{ordinal}");

    // strip lines and the literal-segment cut
    let (line_l, line_lstar, seg_from, seg_to, case) = if is_true_anchor {
        let l = Line::through(&pent.a, &frame.apex);
        let dir = Point::new(
            &designated.x + (&frame.apex.x - &pent.a.x),
            &designated.y + (&frame.apex.y - &pent.a.y),
        );
        let lstar = Line::new(designated.clone(), dir)
            .map_err(|e| BuildError::Geometry(e.to_string()))?;
        (l, lstar, pent.a.clone(), pent.b.clone(), SpikeCase::AtTrueAnchor)
    } else {
        let l = Line::new(pent.x.clone(), designated.clone())
            .map_err(|e| BuildError::Geometry(e.to_string()))?;
        let dir = Point::new(
            &frame.apex.x + (&designated.x - &pent.x.x),
            &frame.apex.y + (&designated.y - &pent.x.y),
        );
        let lstar = Line::new(frame.apex.clone(), dir)
            .map_err(|e| BuildError::Geometry(e.to_string()))?;
        (l, lstar, pent.x.clone(), pent.b.clone(), SpikeCase::AtFalseAnchor)
    };
    let cut = isect(&format!("{tag}.cut"), &line_lstar, &Line::through(&seg_from, &seg_to))?;
    check(strictly_within(&cut, &seg_from, &seg_to), || {
        format!("{tag}_cut_on_segment: parallel line misses the tower segment")
    })?;

    // mouth on the wall, tips halfway toward the far line
    let m_l = isect(&format!("{tag}.mL"), &line_l, &frame.wall)?;
    let m_ls = isect(&format!("{tag}.mLs"), &line_lstar, &frame.wall)?;
    for (mp, nm) in [(&m_l, "L"), (&m_ls, "Lstar")] {
        check(strictly_within(mp, &frame.wall_top, &frame.wall_bottom), || {
            format!("{tag}_mouth_on_wall: {nm} crossing misses the wall segment")
        })?;
    }
    let q_l = isect(&format!("{tag}.qL"), &line_l, &frame.far_line)?;
    let q_ls = isect(&format!("{tag}.qLs"), &line_lstar, &frame.far_line)?;
    check(q_l.x < m_l.x && q_ls.x < m_ls.x, || {
        format!("{tag}_tip_direction: far line is not beyond the wall")
    })?;
    let tip_l = m_l.midpoint(&q_l);
    let tip_ls = m_ls.midpoint(&q_ls);

    // order mouth vertices along the downward wall walk
    let (m_hi, t_hi, t_lo, m_lo) = if m_l.y > m_ls.y {
        (m_l, tip_l, tip_ls, m_ls)
    } else {
        (m_ls, tip_ls, tip_l, m_l)
    };
    check(m_hi.y > m_lo.y, || format!("{tag}_mouth_degenerate"))?;

    let (la, lb) = if is_true_anchor {
        (pent.a.clone(), frame.apex.clone())
    } else {
        (pent.x.clone(), designated.clone())
    };
    let (lsa, lsb) = if is_true_anchor {
        (designated.clone(), line_lstar.q.clone())
    } else {
        (frame.apex.clone(), line_lstar.q.clone())
    };

    Ok(Spike {
        ordinal,
        clause,
        slot,
        case,
        line_l: (la, lb),
        line_lstar: (lsa, lsb),
        verts: [m_hi, t_hi, t_lo, m_lo],
        designated,
        cut,
    })
}

/// Assemble the boundary ring, validate it, build the anchor index, and run
/// the final counting checks.
fn seal(
    phi: &CnfFormula,
    kseq: &KSequence,
    ctx: &Ctx,
    gadgets: Gadgets,
) -> Result<ReductionOutput, BuildError> {
    let n = phi.n;
    let m = phi.m();
    let mut ring: Vec<Point> = Vec::new();
    let mut index = GadgetIndex::default();

    index.insert("w1", gadgets.w[0].clone());
    index.insert("w2", gadgets.w[1].clone());
    index.insert("w3", gadgets.w[2].clone());
    index.insert("w4", gadgets.w[3].clone());
    index.insert("w5", gadgets.w[4].clone());

    ring.push(gadgets.w[0].clone());
    ring.push(gadgets.w[1].clone());
    for var in &gadgets.variables {
        let i = var.i;
        for (r, p) in var.f.iter().enumerate() {
            index.insert(format!("u{i}.f{}", r + 1), p.clone());
        }
        index.insert(format!("u{i}.x1"), var.x1.clone());
        index.insert(format!("u{i}.x2"), var.x2.clone());
        index.insert(format!("u{i}.F.fp"), var.f_prime_f.clone());
        index.insert(format!("u{i}.F.fpp"), var.f_dprime_f.clone());
        index.insert(format!("u{i}.T.fp"), var.f_prime_t.clone());
        index.insert(format!("u{i}.T.fpp"), var.f_dprime_t.clone());
        for (well, spikes) in [("F", &var.spikes_f), ("T", &var.spikes_t)] {
            for (kk, s) in spikes.iter().enumerate() {
                let base = format!("u{i}.{well}.s{}", kk + 1);
                index.insert(format!("{base}.m1"), s.verts[0].clone());
                index.insert(format!("{base}.t1"), s.verts[1].clone());
                index.insert(format!("{base}.t2"), s.verts[2].clone());
                index.insert(format!("{base}.m2"), s.verts[3].clone());
                index.insert(format!("{base}.La"), s.line_l.0.clone());
                index.insert(format!("{base}.Lb"), s.line_l.1.clone());
                index.insert(format!("{base}.Lsa"), s.line_lstar.0.clone());
                index.insert(format!("{base}.Lsb"), s.line_lstar.1.clone());
                index.insert(format!("{base}.q"), s.designated.clone());
                index.insert(format!("{base}.cut"), s.cut.clone());
            }
        }
        ring.extend(var.pattern_ring());
    }
    ring.push(gadgets.w[3].clone());
    for cg in gadgets.clauses.iter().rev() {
        let j = cg.j;
        for (r, p) in cg.v.iter().enumerate() {
            index.insert(format!("c{j}.v{}", r + 1), p.clone());
        }
        index.insert(format!("c{j}.xp"), cg.x_prime.clone());
        index.insert(format!("c{j}.xpp"), cg.x_dprime.clone());
        for (slot, pent) in cg.pentagons.iter().enumerate() {
            let sname = if slot == 3 {
                "p".to_string()
            } else {
                format!("l{}", slot + 1)
            };
            index.insert(format!("c{j}.{sname}.a"), pent.a.clone());
            index.insert(format!("c{j}.{sname}.b"), pent.b.clone());
            index.insert(format!("c{j}.{sname}.c"), pent.c.clone());
            index.insert(format!("c{j}.{sname}.d"), pent.d.clone());
            index.insert(format!("c{j}.{sname}.e"), pent.e.clone());
            index.insert(format!("c{j}.{sname}.x"), pent.x.clone());
        }
        ring.extend(cg.junction_ring());
    }
    // placement witnesses
    {
        let c1 = &gadgets.clauses[0];
        let a1 = &c1.pentagons[0].a;
        let b1 = &c1.pentagons[0].b;
        let z = isect(
            "c1.z",
            &Line::through(a1, b1),
            &Line::through(&gadgets.w[2], &gadgets.w[3]),
        )?;
        let f_n10 = &gadgets.variables[n - 1].f[9];
        check(z.x >= f_n10.x, || {
            "clause1_z_right_of_patterns: literal wall line lands short".to_string()
        })?;
        index.insert("c1.z", z);
        for j in 2..=m {
            let prev_v1 = &gadgets.clauses[j - 2].v[0];
            let top = Point::new(Rat::zero(), ctx.k[6].clone());
            let top2 = Point::new(rat_int(1), ctx.k[6].clone());
            let h = isect(
                &format!("c{j}.h"),
                &Line::through(&gadgets.w[2], prev_v1),
                &Line::through(&top, &top2),
            )?;
            check(gadgets.clauses[j - 1].v[3].x >= h.x, || {
                format!("clause{j}_doubling_past_h")
            })?;
            index.insert(format!("c{j}.h"), h);
        }
    }

    let expected = 49 * m + 10 * n + 3;
    check(ring.len() == expected, || {
        format!(
            "vertex_count: ring has {} vertices, expected {}",
            ring.len(),
            expected
        )
    })?;
    let polygon =
        SimplePolygon::new(ring).map_err(|e| BuildError::Check(format!("polygon_simple: {e}")))?;

    // fill vertex indices by exact point match
    {
        let mut by_point: std::collections::BTreeMap<&Point, usize> = Default::default();
        for (vi, p) in polygon.vertices().iter().enumerate() {
            by_point.insert(p, vi);
        }
        let names: Vec<String> = index.anchors.keys().cloned().collect();
        for name in names {
            let info = index.anchors.get_mut(&name).unwrap();
            // w3 and w5 stay derived aliases of pattern/junction vertices
            if name == "w3" || name == "w5" {
                continue;
            }
            if let Some(vi) = by_point.get(&info.point) {
                info.vertex = Some(*vi);
            }
        }
    }

    let tower_bound = 8 * m + 2 * n + 2;
    Ok(ReductionOutput {
        vertex_count: polygon.len(),
        polygon,
        index,
        params: kseq.clone(),
        tower_bound,
        n,
        m,
        gadgets,
    })
}

/// Second tower of a pair: a fixed 1/64 of the way from the anchor toward
/// the admissible segment end, so it stays strictly inside every strip and
/// kernel that constrains it.
fn second_tower(anchor: &Point, end: &Point) -> Point {
    anchor.lerp(end, &rat(1, 64))
}

pub fn certificate_towers(
    out: &ReductionOutput,
    alpha: &Assignment,
) -> Result<Certificate, BuildError> {
    let phi = out.gadgets.formula()?;
    if alpha.truth.len() != out.n {
        return Err(BuildError::BadAssignment);
    }
    if let Some(j) = phi.first_unsatisfied(alpha) {
        return Err(BuildError::Unsatisfied(j));
    }

    let mut towers: Vec<Tower> = Vec::new();
    towers.push(Tower::new("w1", out.gadgets.w[0].clone()));
    towers.push(Tower::new("w2", out.gadgets.w[1].clone()));

    for var in &out.gadgets.variables {
        let well_t = alpha.truth[var.i - 1];
        let apex = var.apex(well_t).clone();
        let core = subpolygon_core(&out.polygon, var, well_t);
        check(core.contains(&apex), || {
            format!("u{}_apex_in_kernel", var.i)
        })?;
        // admissible stretch of the wall ray inside the visibility core
        let seg = ConvexRegion::Segment(apex.clone(), var.f_dprime(well_t).clone());
        let stretch = core.intersect(&seg);
        let end = match &stretch {
            ConvexRegion::Segment(a, b) => {
                if *a == apex {
                    b.clone()
                } else if *b == apex {
                    a.clone()
                } else {
                    return Err(BuildError::Check(format!(
                        "u{}_kernel_stretch: apex not an endpoint",
                        var.i
                    )));
                }
            }
            _ => {
                return Err(BuildError::Check(format!(
                    "u{}_kernel_stretch_degenerate: no room for the second tower",
                    var.i
                )))
            }
        };
        towers.push(Tower::new(format!("u{}.t1", var.i), apex.clone()));
        towers.push(Tower::new(
            format!("u{}.t2", var.i),
            second_tower(&apex, &end),
        ));
    }

    for (j0, clause) in phi.clauses.iter().enumerate() {
        let cg = &out.gadgets.clauses[j0];
        for (q, lit) in clause.iter().enumerate() {
            let pent = &cg.pentagons[q];
            let truth = alpha.truth[lit.var - 1] == lit.positive;
            let var = &out.gadgets.variables[lit.var - 1];
            // this occurrence's spikes: the a-case one constrains the true
            // pair, the x-case one the false pair
            let all = var.spikes_f.iter().chain(var.spikes_t.iter());
            let mut cut_a: Option<Point> = None;
            let mut cut_x: Option<Point> = None;
            for s in all {
                if s.clause == j0 && s.slot == q {
                    match s.case {
                        SpikeCase::AtTrueAnchor => cut_a = Some(s.cut.clone()),
                        SpikeCase::AtFalseAnchor => cut_x = Some(s.cut.clone()),
                    }
                }
            }
            let (anchor, end) = if truth {
                let end = nearer_on_segment(&pent.a, &pent.b, cut_a);
                (pent.a.clone(), end)
            } else {
                let end = nearer_on_segment(&pent.x, &pent.b, cut_x);
                (pent.x.clone(), end)
            };
            towers.push(Tower::new(format!("c{}.l{}.t1", j0 + 1, q + 1), anchor.clone()));
            towers.push(Tower::new(
                format!("c{}.l{}.t2", j0 + 1, q + 1),
                second_tower(&anchor, &end),
            ));
        }
        // the fourth pentagon always carries the true pair
        let pent = &cg.pentagons[3];
        towers.push(Tower::new(format!("c{}.p.t1", j0 + 1), pent.a.clone()));
        towers.push(Tower::new(
            format!("c{}.p.t2", j0 + 1),
            second_tower(&pent.a, &pent.b),
        ));
    }

    let expected = out.tower_bound;
    check(towers.len() == expected, || {
        format!(
            "tower_count: built {} towers, expected {}",
            towers.len(),
            expected
        )
    })?;
    for t in &towers {
        check(out.polygon.contains(&t.pos), || {
            format!("tower_in_polygon: {} lies outside", t.label)
        })?;
    }
    let towers = TowerSet::new(towers).map_err(|e| BuildError::Geometry(e.to_string()))?;
    Ok(Certificate {
        assignment: alpha.clone(),
        towers,
    })
}

/// Endpoint of the admissible tower stretch: the constraining cut if it sits
/// between the anchor and the default end.
fn nearer_on_segment(anchor: &Point, default_end: &Point, cut: Option<Point>) -> Point {
    match cut {
        Some(c) if strictly_within(&c, anchor, default_end) => c,
        _ => default_end.clone(),
    }
}

/// The convex core of positions that see all of one well-side subpolygon:
/// the intersection of the inner half-planes of its real edges (the virtual
/// cut/ceiling chords are open windows, not walls, so they impose nothing).
/// Extends past the well apex along the wall ray, which is where the second
/// pattern tower lives.
pub(crate) fn subpolygon_core(
    host: &SimplePolygon,
    var: &VariableGadget,
    well_t: bool,
) -> ConvexRegion {
    let mut chain: Vec<Point> = Vec::new();
    chain.push(var.f[0].clone());
    chain.push(var.f[1].clone());
    chain.push(var.f[2].clone());
    if well_t {
        // skip the virtual cut f3 -> f7: restart the chain at f7
        let mut chains = vec![std::mem::take(&mut chain)];
        chain.push(var.f[6].clone());
        for s in &var.spikes_t {
            chain.extend(s.verts.iter().cloned());
        }
        chain.push(var.f[7].clone());
        chain.push(var.f[8].clone());
        chain.push(var.f[9].clone());
        chains.push(chain);
        return core_of_chains(host, &chains);
    }
    for s in &var.spikes_f {
        chain.extend(s.verts.iter().cloned());
    }
    chain.push(var.f[3].clone());
    chain.push(var.f[4].clone());
    chain.push(var.f[5].clone());
    core_of_chains(host, &[chain])
}

/// Intersection of the left half-planes of consecutive edges along each open
/// chain, clipped to a padded bounding box of the host polygon.
fn core_of_chains(host: &SimplePolygon, chains: &[Vec<Point>]) -> ConvexRegion {
    let (lo, hi) = host.bbox();
    let pad = rat_int(1);
    let mut region = ConvexRegion::Polygon(vec![
        Point::new(&lo.x - &pad, &lo.y - &pad),
        Point::new(&hi.x + &pad, &lo.y - &pad),
        Point::new(&hi.x + &pad, &hi.y + &pad),
        Point::new(&lo.x - &pad, &hi.y + &pad),
    ]);
    for chain in chains {
        for w in chain.windows(2) {
            region = region.clip_left(&w[0], &w[1]);
            if region.is_empty() {
                return region;
            }
        }
    }
    region
}
