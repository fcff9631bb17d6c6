//! Structured view of the constructed gadgets, reconstructible from the
//! flat anchor index so that a serialized polygon document round-trips into
//! the exact same verification machinery.

use super::{BuildError, GadgetIndex, KSequence};
use crate::formula::{CnfFormula, Lit};
use crate::geometry::*;

/// One five-vertex literal-shaped pentagon on a junction top line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PentagonGadget {
    pub a: Point,
    pub b: Point,
    pub c: Point,
    pub d: Point,
    pub e: Point,
    /// Where the extension of edge `ed` meets segment `cb`; not a vertex.
    pub x: Point,
}

impl PentagonGadget {
    pub fn ring(&self) -> Vec<Point> {
        vec![
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
            self.e.clone(),
        ]
    }
}

/// Which kind of line pair defines a spike's strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpikeCase {
    /// The strip's primary line passes through the pentagon's `a` vertex and
    /// the well apex; the parallel line passes through a designated point.
    AtTrueAnchor,
    /// The strip's primary line passes through the pentagon's derived `x`
    /// point and a designated point; the parallel line through the well apex.
    AtFalseAnchor,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spike {
    /// Occurrence ordinal of the owning variable (1-based, clause order).
    pub ordinal: usize,
    /// Clause and slot this spike is aligned with (0-based).
    pub clause: usize,
    pub slot: usize,
    pub case: SpikeCase,
    /// Primary strip line, as a point pair.
    pub line_l: (Point, Point),
    /// Parallel strip line.
    pub line_lstar: (Point, Point),
    /// Mouth and tip vertices in boundary-walk order (upper mouth, upper
    /// tip, lower tip, lower mouth).
    pub verts: [Point; 4],
    /// Designated point near the well apex this spike's strip is built on.
    pub designated: Point,
    /// Where the parallel line crosses the literal's tower segment.
    pub cut: Point,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableGadget {
    pub i: usize,
    /// f1..f10 in boundary order.
    pub f: [Point; 10],
    pub x1: Point,
    pub x2: Point,
    /// First strip-line hit along the well apex ray, and its midpoint, for
    /// each well (the designated points live between apex and midpoint).
    pub f_prime_f: Point,
    pub f_dprime_f: Point,
    pub f_prime_t: Point,
    pub f_dprime_t: Point,
    pub spikes_f: Vec<Spike>,
    pub spikes_t: Vec<Spike>,
}

impl VariableGadget {
    /// Closed ring of the full pattern subpolygon (spike notches included),
    /// counterclockwise, closed by the open ceiling chord f10 -> f1.
    pub fn pattern_ring(&self) -> Vec<Point> {
        let mut r = Vec::new();
        r.push(self.f[0].clone());
        r.push(self.f[1].clone());
        r.push(self.f[2].clone());
        for s in &self.spikes_f {
            r.extend(s.verts.iter().cloned());
        }
        r.push(self.f[3].clone());
        r.push(self.f[4].clone());
        r.push(self.f[5].clone());
        r.push(self.f[6].clone());
        for s in &self.spikes_t {
            r.extend(s.verts.iter().cloned());
        }
        r.push(self.f[7].clone());
        r.push(self.f[8].clone());
        r.push(self.f[9].clone());
        r
    }

    /// The left star subpolygon: triangle, ledge and first well, cut along
    /// the right wall line up to the ceiling.
    pub fn left_ring(&self) -> Vec<Point> {
        let mut r = Vec::new();
        r.push(self.f[0].clone());
        r.push(self.f[1].clone());
        r.push(self.f[2].clone());
        for s in &self.spikes_f {
            r.extend(s.verts.iter().cloned());
        }
        r.push(self.f[3].clone());
        r.push(self.f[4].clone());
        r.push(self.f[5].clone());
        r.push(self.x1.clone());
        r
    }

    /// The right star subpolygon: triangle, ledge and second well, cut along
    /// the sloped floor line from f3 to f7.
    pub fn right_ring(&self) -> Vec<Point> {
        let mut r = Vec::new();
        r.push(self.f[0].clone());
        r.push(self.f[1].clone());
        r.push(self.f[2].clone());
        r.push(self.f[6].clone());
        for s in &self.spikes_t {
            r.extend(s.verts.iter().cloned());
        }
        r.push(self.f[7].clone());
        r.push(self.f[8].clone());
        r.push(self.f[9].clone());
        r
    }

    pub fn apex(&self, well_t: bool) -> &Point {
        if well_t {
            &self.f[9]
        } else {
            &self.f[5]
        }
    }

    pub fn spikes(&self, well_t: bool) -> &[Spike] {
        if well_t {
            &self.spikes_t
        } else {
            &self.spikes_f
        }
    }

    pub fn f_dprime(&self, well_t: bool) -> &Point {
        if well_t {
            &self.f_dprime_t
        } else {
            &self.f_dprime_f
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseGadget {
    pub j: usize,
    /// v1..v5 in boundary order.
    pub v: [Point; 5],
    /// Literal pentagons for slots 1..3 and the always-true fourth pentagon.
    pub pentagons: [PentagonGadget; 4],
    /// Kernel corner on the top line (extension of edge v1v2).
    pub x_prime: Point,
    /// Kernel corner on edge v4v5 (extension of edge v2v3).
    pub x_dprime: Point,
}

impl ClauseGadget {
    /// The inner pentagon v1..v5 as a closed ring.
    pub fn star_ring(&self) -> Vec<Point> {
        self.v.to_vec()
    }

    /// Full 25-vertex junction ring in boundary order.
    pub fn junction_ring(&self) -> Vec<Point> {
        let mut r = Vec::new();
        r.push(self.v[0].clone());
        r.push(self.v[1].clone());
        r.push(self.v[2].clone());
        for p in [&self.pentagons[3], &self.pentagons[2], &self.pentagons[1], &self.pentagons[0]] {
            r.extend(p.ring());
        }
        r.push(self.v[3].clone());
        r.push(self.v[4].clone());
        r
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadgets {
    pub w: [Point; 5],
    pub clauses: Vec<ClauseGadget>,
    pub variables: Vec<VariableGadget>,
}

impl Gadgets {
    /// The five-corner main chamber ring w1..w5 (w3 and w5 coincide with
    /// pattern/junction vertices).
    pub fn chamber_ring(&self) -> Vec<Point> {
        vec![
            self.w[3].clone(),
            self.w[4].clone(),
            self.w[0].clone(),
            self.w[1].clone(),
            self.w[2].clone(),
        ]
    }

    /// Recover the source formula from the spike alignment structure.
    pub fn formula(&self) -> Result<CnfFormula, BuildError> {
        let m = self.clauses.len();
        let n = self.variables.len();
        let mut slots: Vec<Vec<Option<Lit>>> = vec![vec![None; 3]; m];
        for var in &self.variables {
            for s in &var.spikes_t {
                let positive = s.case == SpikeCase::AtFalseAnchor;
                if s.clause >= m || s.slot >= 3 {
                    return Err(BuildError::Formula("spike clause reference".into()));
                }
                if slots[s.clause][s.slot].is_some() {
                    return Err(BuildError::Formula("duplicate literal slot".into()));
                }
                slots[s.clause][s.slot] = Some(Lit {
                    var: var.i,
                    positive,
                });
            }
        }
        let mut clauses = Vec::with_capacity(m);
        for (j, c) in slots.into_iter().enumerate() {
            let lits: Vec<Lit> = c
                .into_iter()
                .map(|l| l.ok_or(BuildError::Formula(format!("clause {} slot unfilled", j + 1))))
                .collect::<Result<_, _>>()?;
            clauses.push([lits[0], lits[1], lits[2]]);
        }
        CnfFormula::new(n, clauses).map_err(|e| BuildError::Formula(e.to_string()))
    }

    /// Rebuild the structured gadget view from the flat anchor index.
    pub fn from_index(
        index: &GadgetIndex,
        n: usize,
        m: usize,
        _params: &KSequence,
    ) -> Result<Gadgets, BuildError> {
        let pt = |name: String| -> Result<Point, BuildError> {
            index
                .point(&name)
                .cloned()
                .ok_or_else(|| BuildError::Check(format!("missing anchor {name}")))
        };
        let mut w = Vec::new();
        for r in 1..=5 {
            w.push(pt(format!("w{r}"))?);
        }
        let mut clauses = Vec::with_capacity(m);
        for j in 1..=m {
            let mut v = Vec::new();
            for r in 1..=5 {
                v.push(pt(format!("c{j}.v{r}"))?);
            }
            let mut pents = Vec::new();
            for slot in ["l1", "l2", "l3", "p"] {
                pents.push(PentagonGadget {
                    a: pt(format!("c{j}.{slot}.a"))?,
                    b: pt(format!("c{j}.{slot}.b"))?,
                    c: pt(format!("c{j}.{slot}.c"))?,
                    d: pt(format!("c{j}.{slot}.d"))?,
                    e: pt(format!("c{j}.{slot}.e"))?,
                    x: pt(format!("c{j}.{slot}.x"))?,
                });
            }
            clauses.push(ClauseGadget {
                j,
                v: [
                    v[0].clone(),
                    v[1].clone(),
                    v[2].clone(),
                    v[3].clone(),
                    v[4].clone(),
                ],
                pentagons: [
                    pents[0].clone(),
                    pents[1].clone(),
                    pents[2].clone(),
                    pents[3].clone(),
                ],
                x_prime: pt(format!("c{j}.xp"))?,
                x_dprime: pt(format!("c{j}.xpp"))?,
            });
        }
        let mut variables = Vec::with_capacity(n);
        for i in 1..=n {
            let mut f = Vec::new();
            for r in 1..=10 {
                f.push(pt(format!("u{i}.f{r}"))?);
            }
            let mut spikes_by_well = Vec::new();
            for well in ["F", "T"] {
                let mut spikes = Vec::new();
                for k in 1.. {
                    let base = format!("u{i}.{well}.s{k}");
                    if index.point(&format!("{base}.m1")).is_none() {
                        break;
                    }
                    let verts = [
                        pt(format!("{base}.m1"))?,
                        pt(format!("{base}.t1"))?,
                        pt(format!("{base}.t2"))?,
                        pt(format!("{base}.m2"))?,
                    ];
                    let line_l = (pt(format!("{base}.La"))?, pt(format!("{base}.Lb"))?);
                    let line_lstar = (pt(format!("{base}.Lsa"))?, pt(format!("{base}.Lsb"))?);
                    let designated = pt(format!("{base}.q"))?;
                    let cut = pt(format!("{base}.cut"))?;
                    // identify the aligned literal anchor by exact point match
                    let mut found = None;
                    'outer: for (cj, cg) in clauses.iter().enumerate() {
                        for (slot, pent) in cg.pentagons.iter().enumerate().take(3) {
                            if line_l.0 == pent.a {
                                found = Some((cj, slot, SpikeCase::AtTrueAnchor));
                                break 'outer;
                            }
                            if line_l.0 == pent.x {
                                found = Some((cj, slot, SpikeCase::AtFalseAnchor));
                                break 'outer;
                            }
                        }
                    }
                    let (clause, slot, case) = found.ok_or_else(|| {
                        BuildError::Check(format!("{base}: strip line anchored at no literal"))
                    })?;
                    spikes.push(Spike {
                        ordinal: k,
                        clause,
                        slot,
                        case,
                        line_l,
                        line_lstar,
                        verts,
                        designated,
                        cut,
                    });
                }
                spikes_by_well.push(spikes);
            }
            let spikes_t = spikes_by_well.pop().unwrap();
            let spikes_f = spikes_by_well.pop().unwrap();
            variables.push(VariableGadget {
                i,
                f: [
                    f[0].clone(),
                    f[1].clone(),
                    f[2].clone(),
                    f[3].clone(),
                    f[4].clone(),
                    f[5].clone(),
                    f[6].clone(),
                    f[7].clone(),
                    f[8].clone(),
                    f[9].clone(),
                ],
                x1: pt(format!("u{i}.x1"))?,
                x2: pt(format!("u{i}.x2"))?,
                f_prime_f: pt(format!("u{i}.F.fp"))?,
                f_dprime_f: pt(format!("u{i}.F.fpp"))?,
                f_prime_t: pt(format!("u{i}.T.fp"))?,
                f_dprime_t: pt(format!("u{i}.T.fpp"))?,
                spikes_f,
                spikes_t,
            });
        }
        Ok(Gadgets {
            w: [
                w[0].clone(),
                w[1].clone(),
                w[2].clone(),
                w[3].clone(),
                w[4].clone(),
            ],
            clauses,
            variables,
        })
    }
}
