//! Certificate verification by exact stratified sampling.
//!
//! Every sample (interior, boundary and every named anchor) must localize
//! uniquely from its signal set. Uniqueness is decided by the mirror
//! candidate method: with at least two signals the only alternative position
//! is the reflection across the line through two visible towers, and that
//! candidate either leaves the polygon, sees a different tower set, or sits
//! at a different exact squared distance from some visible tower.

use super::sample::{sample_in_triangles, sample_on_segments, triangulate};
use super::{Check, SampleStats, StratumStats, VerificationReport};
use crate::geometry::*;
use crate::reduction::{Certificate, ReductionOutput};
use crate::trilateration::{visible_towers, TowerSet};
use crate::visibility::visibility_polygon;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeSet;

enum Region {
    Interior(Vec<[Point; 3]>),
    Boundary(Vec<(Point, Point)>),
    Fixed(Vec<Point>),
}

struct Stratum {
    name: String,
    region: Region,
    quota: usize,
}

/// Precomputed per-tower visibility regions for fast signal-set queries.
struct SignalIndex<'a> {
    towers: &'a TowerSet,
    regions: Vec<PreparedPolygon>,
    host: PreparedPolygon,
}

impl<'a> SignalIndex<'a> {
    fn build(poly: &SimplePolygon, towers: &'a TowerSet) -> Result<Self, String> {
        let mut regions = Vec::with_capacity(towers.len());
        for t in towers.towers() {
            let vp = visibility_polygon(poly, &t.pos)
                .map_err(|e| format!("visibility region for {}: {e}", t.label))?;
            regions.push(PreparedPolygon::new(&vp.region));
        }
        Ok(SignalIndex {
            towers,
            regions,
            host: PreparedPolygon::new(poly),
        })
    }

    /// Indices of towers visible from `p`.
    fn visible(&self, p: &Point) -> Vec<usize> {
        (0..self.regions.len())
            .filter(|&i| self.regions[i].contains(p))
            .collect()
    }
}

enum Outcome {
    Unique,
    Ambiguous(Point),
    Underdetermined,
    NoSignal,
}

fn localize_sample(idx: &SignalIndex<'_>, p: &Point) -> Outcome {
    let vis = idx.visible(p);
    match vis.len() {
        0 => Outcome::NoSignal,
        1 => {
            let t = &idx.towers.towers()[vis[0]];
            if t.pos == *p {
                Outcome::Unique
            } else {
                Outcome::Underdetermined
            }
        }
        _ => {
            let t1 = &idx.towers.towers()[vis[0]];
            let t2 = &idx.towers.towers()[vis[1]];
            let mirror = reflect_across_line(p, &Line::through(&t1.pos, &t2.pos));
            if mirror == *p {
                return Outcome::Unique;
            }
            if idx.host.locate(&mirror) == PointLocation::Exterior {
                return Outcome::Unique;
            }
            let mvis = idx.visible(&mirror);
            if mvis != vis {
                return Outcome::Unique;
            }
            // same visible set: compare exact squared distances
            let same = vis.iter().all(|&ti| {
                let tp = &idx.towers.towers()[ti].pos;
                tp.dist2(p) == tp.dist2(&mirror)
            });
            if same {
                Outcome::Ambiguous(mirror)
            } else {
                Outcome::Unique
            }
        }
    }
}

fn build_strata(out: &ReductionOutput, cert: &Certificate, budget: usize) -> Vec<Stratum> {
    let g = &out.gadgets;
    let mut strata: Vec<Stratum> = Vec::new();
    let mut interiors: Vec<(String, Vec<Point>)> = Vec::new();
    let mut weights: Vec<usize> = Vec::new();

    interiors.push(("chamber".into(), g.chamber_ring()));
    weights.push(8);
    for cg in &g.clauses {
        interiors.push((format!("c{}.star", cg.j), cg.star_ring()));
        weights.push(4);
        for (slot, pent) in cg.pentagons.iter().enumerate() {
            let sname = if slot == 3 {
                "p".to_string()
            } else {
                format!("l{}", slot + 1)
            };
            interiors.push((format!("c{}.{}", cg.j, sname), pent.ring()));
            weights.push(2);
        }
    }
    for var in &g.variables {
        let i = var.i;
        interiors.push((format!("u{i}.pattern"), var.pattern_ring()));
        weights.push(4);
        interiors.push((
            format!("u{i}.triangle"),
            vec![var.f[0].clone(), var.f[1].clone(), var.f[2].clone()],
        ));
        weights.push(1);
        interiors.push((
            format!("u{i}.wellF"),
            vec![
                var.f[2].clone(),
                var.f[3].clone(),
                var.f[4].clone(),
                var.f[5].clone(),
            ],
        ));
        weights.push(2);
        interiors.push((
            format!("u{i}.wellT"),
            vec![
                var.f[6].clone(),
                var.f[7].clone(),
                var.f[8].clone(),
                var.f[9].clone(),
            ],
        ));
        weights.push(2);
        for (well, spikes) in [("F", &var.spikes_f), ("T", &var.spikes_t)] {
            for s in spikes {
                interiors.push((
                    format!("u{i}.{well}.s{}", s.ordinal),
                    s.verts.to_vec(),
                ));
                weights.push(1);
            }
        }
    }

    // boundary strata: the junction top-line stretches plus a global sweep
    let mut topline: Vec<(Point, Point)> = Vec::new();
    for cg in &g.clauses {
        let p = &cg.pentagons;
        topline.push((cg.v[2].clone(), p[3].a.clone()));
        topline.push((p[3].e.clone(), p[2].a.clone()));
        topline.push((p[2].e.clone(), p[1].a.clone()));
        topline.push((p[1].e.clone(), p[0].a.clone()));
        topline.push((p[0].e.clone(), cg.v[3].clone()));
    }
    let all_edges: Vec<(Point, Point)> = out
        .polygon
        .edges()
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();

    // fixed witnesses: every anchor that lies in the polygon, plus all towers
    let mut fixed: Vec<Point> = Vec::new();
    let mut seen: BTreeSet<Point> = BTreeSet::new();
    for info in out.index.anchors.values() {
        if out.polygon.contains(&info.point) && seen.insert(info.point.clone()) {
            fixed.push(info.point.clone());
        }
    }
    for t in cert.towers.towers() {
        if seen.insert(t.pos.clone()) {
            fixed.push(t.pos.clone());
        }
    }

    // quota allocation: fixed witnesses are always included; the remaining
    // budget is split over weighted interior strata and the boundary sweeps
    let fixed_count = fixed.len();
    let boundary_weight = 4usize;
    let total_weight: usize = weights.iter().sum::<usize>() + 2 * boundary_weight;
    let sampled_budget = budget.saturating_sub(fixed_count).max(total_weight);
    for ((name, ring), w) in interiors.into_iter().zip(weights) {
        let quota = (sampled_budget * w / total_weight).max(3);
        strata.push(Stratum {
            name,
            region: Region::Interior(triangulate(&ring)),
            quota,
        });
    }
    strata.push(Stratum {
        name: "topline".into(),
        region: Region::Boundary(topline),
        quota: (sampled_budget * boundary_weight / total_weight).max(3),
    });
    strata.push(Stratum {
        name: "boundary".into(),
        region: Region::Boundary(all_edges),
        quota: (sampled_budget * boundary_weight / total_weight).max(3),
    });
    strata.push(Stratum {
        name: "anchors".into(),
        region: Region::Fixed(fixed),
        quota: fixed_count,
    });
    strata
}

pub fn verify_certificate(
    out: &ReductionOutput,
    cert: &Certificate,
    sample_budget: usize,
    seed: u64,
) -> VerificationReport {
    let mut checks: Vec<Check> = Vec::new();
    let poly = &out.polygon;

    // tower sanity
    checks.push(if cert.towers.len() == out.tower_bound {
        Check::pass("certificate_tower_count")
    } else {
        Check::fail(
            "certificate_tower_count",
            format!("{} vs K = {}", cert.towers.len(), out.tower_bound),
        )
    });
    let all_inside = cert
        .towers
        .towers()
        .iter()
        .all(|t| poly.contains(&t.pos));
    checks.push(if all_inside {
        Check::pass("certificate_towers_in_polygon")
    } else {
        Check::fail("certificate_towers_in_polygon", "a tower lies outside")
    });

    let idx = match SignalIndex::build(poly, &cert.towers) {
        Ok(i) => i,
        Err(e) => {
            checks.push(Check::fail("tower_visibility_regions", e));
            let mut rep = VerificationReport::new("certificate", checks);
            rep.seed = Some(seed);
            rep.sample_budget = Some(sample_budget);
            return rep;
        }
    };

    // the fast signal index must agree with the direct segment test
    {
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0xC0FFEE);
        let tris = triangulate(&out.gadgets.chamber_ring());
        let mut agree = true;
        for _ in 0..24 {
            let p = sample_in_triangles(&tris, &mut rng);
            if poly.locate(&p) == PointLocation::Exterior {
                continue;
            }
            let fast: Vec<String> = idx
                .visible(&p)
                .into_iter()
                .map(|i| idx.towers.towers()[i].label.clone())
                .collect();
            let slow: Vec<String> = visible_towers(poly, &cert.towers, &p)
                .map(|s| s.iter().map(|sig| sig.label).collect())
                .unwrap_or_default();
            if fast != slow {
                agree = false;
                break;
            }
        }
        checks.push(if agree {
            Check::pass("visibility_regions_consistent")
        } else {
            Check::fail(
                "visibility_regions_consistent",
                "fast index disagrees with segment visibility",
            )
        });
    }

    let strata = build_strata(out, cert, sample_budget);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut stats = SampleStats::default();
    let mut first_failures: Vec<String> = Vec::new();

    for stratum in &strata {
        let mut st = StratumStats {
            name: stratum.name.clone(),
            ..Default::default()
        };
        let mut run = |p: Point, st: &mut StratumStats| {
            let loc = idx.host.locate(&p);
            if loc == PointLocation::Exterior {
                return;
            }
            if loc == PointLocation::Boundary {
                st.boundary_samples += 1;
            } else {
                st.interior_samples += 1;
            }
            stats.total_samples += 1;
            match localize_sample(&idx, &p) {
                Outcome::Unique => st.unique += 1,
                Outcome::Ambiguous(q) => {
                    st.ambiguous += 1;
                    stats.failures += 1;
                    if first_failures.len() < 8 {
                        first_failures.push(format!(
                            "{}: ({}, {}) ambiguous with ({}, {})",
                            stratum.name, p.x, p.y, q.x, q.y
                        ));
                    }
                }
                Outcome::Underdetermined => {
                    st.underdetermined += 1;
                    stats.failures += 1;
                    if first_failures.len() < 8 {
                        first_failures
                            .push(format!("{}: ({}, {}) underdetermined", stratum.name, p.x, p.y));
                    }
                }
                Outcome::NoSignal => {
                    st.no_signal += 1;
                    stats.failures += 1;
                    if first_failures.len() < 8 {
                        first_failures
                            .push(format!("{}: ({}, {}) sees no tower", stratum.name, p.x, p.y));
                    }
                }
            }
        };
        match &stratum.region {
            Region::Interior(tris) => {
                if tris.is_empty() {
                    continue;
                }
                for _ in 0..stratum.quota {
                    run(sample_in_triangles(tris, &mut rng), &mut st);
                }
            }
            Region::Boundary(segs) => {
                if segs.is_empty() {
                    continue;
                }
                for _ in 0..stratum.quota {
                    run(sample_on_segments(segs, &mut rng), &mut st);
                }
            }
            Region::Fixed(pts) => {
                for p in pts {
                    run(p.clone(), &mut st);
                }
            }
        }
        stats.strata.push(st);
    }

    checks.push(if stats.failures == 0 {
        Check::pass("localization_zero_failures")
    } else {
        Check::fail(
            "localization_zero_failures",
            format!("{} failures; first: {}", stats.failures, first_failures.join(" | ")),
        )
    });

    let mut rep = VerificationReport::new("certificate", checks);
    rep.sample_stats = Some(stats);
    rep.seed = Some(seed);
    rep.sample_budget = Some(sample_budget);
    rep.passed = rep.checks.iter().all(|c| c.status == super::CheckStatus::Pass);
    rep
}
