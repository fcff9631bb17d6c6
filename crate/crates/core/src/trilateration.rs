//! Agent/tower signal model and exact localization.
//!
//! A tower broadcasts its coordinates; an agent at `p` receives, for every
//! tower it can see, the tower position and the squared distance to it.
//! Localization recovers the agent position from that information alone.
//! With two or more signals the candidate set is finite: a point and its
//! mirror across the line through two towers, so the whole procedure is
//! exact over the rationals.

use crate::geometry::*;
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrilaterationError {
    #[error("point lies outside the polygon")]
    PointOutside,
    #[error("tower {0:?} lies outside the polygon")]
    TowerOutside(String),
    #[error("duplicate tower position for labels {0:?} and {1:?}")]
    DuplicateTowerPosition(String, String),
    #[error("duplicate tower label {0:?}")]
    DuplicateTowerLabel(String),
    #[error("inconsistent signal set: no point reproduces it")]
    InconsistentSignals,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    pub label: String,
    pub pos: Point,
}

impl Tower {
    pub fn new(label: impl Into<String>, pos: Point) -> Self {
        Tower {
            label: label.into(),
            pos,
        }
    }
}

/// A set of towers with distinct labels and distinct positions, ordered by
/// label for deterministic iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerSet {
    towers: Vec<Tower>,
}

impl TowerSet {
    pub fn new(mut towers: Vec<Tower>) -> Result<Self, TrilaterationError> {
        towers.sort_by(|a, b| a.label.cmp(&b.label));
        for w in towers.windows(2) {
            if w[0].label == w[1].label {
                return Err(TrilaterationError::DuplicateTowerLabel(w[0].label.clone()));
            }
        }
        for i in 0..towers.len() {
            for j in i + 1..towers.len() {
                if towers[i].pos == towers[j].pos {
                    return Err(TrilaterationError::DuplicateTowerPosition(
                        towers[i].label.clone(),
                        towers[j].label.clone(),
                    ));
                }
            }
        }
        Ok(TowerSet { towers })
    }

    pub fn towers(&self) -> &[Tower] {
        &self.towers
    }

    pub fn len(&self) -> usize {
        self.towers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.towers.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&Tower> {
        self.towers.iter().find(|t| t.label == label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signal {
    pub label: String,
    pub pos: Point,
    pub dist2: Rat,
}

/// The complete information an agent receives: one signal per visible tower.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SignalSet {
    signals: BTreeMap<String, (Point, Rat)>,
}

impl SignalSet {
    pub fn insert(&mut self, label: String, pos: Point, dist2: Rat) {
        self.signals.insert(label, (pos, dist2));
    }

    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Signal> + '_ {
        self.signals.iter().map(|(l, (p, d))| Signal {
            label: l.clone(),
            pos: p.clone(),
            dist2: d.clone(),
        })
    }

    pub fn contains(&self, label: &str) -> bool {
        self.signals.contains_key(label)
    }
}

/// Signals for exactly the towers visible from `p`, with exact squared
/// distances.
pub fn visible_towers(
    poly: &SimplePolygon,
    towers: &TowerSet,
    p: &Point,
) -> Result<SignalSet, TrilaterationError> {
    if poly.locate(p) == PointLocation::Exterior {
        return Err(TrilaterationError::PointOutside);
    }
    let mut out = SignalSet::default();
    for t in towers.towers() {
        if poly.locate(&t.pos) == PointLocation::Exterior {
            return Err(TrilaterationError::TowerOutside(t.label.clone()));
        }
        if segment_in_polygon(poly, &t.pos, p).map_err(|_| TrilaterationError::PointOutside)? {
            out.insert(t.label.clone(), t.pos.clone(), t.pos.dist2(p));
        }
    }
    Ok(out)
}

/// What a single-signal (or empty) observation pins down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArcDescription {
    /// No tower is visible; the agent could be anywhere the certificate does
    /// not cover.
    NoSignal,
    /// The agent is somewhere on this circle, restricted to the region the
    /// tower sees.
    Circle { center: Point, dist2: Rat },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalizationResult {
    Unique(Point),
    Ambiguous(Vec<Point>),
    Underdetermined(ArcDescription),
}

/// Exact square root of a rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r < &Rat::zero() {
        return None;
    }
    let num = r.numer();
    let den = r.denom();
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(Rat::new(sn, sd))
    } else {
        None
    }
}

/// Recover every point of the polygon whose signal set equals `s` exactly.
///
/// The candidate set with two or more signals is finite: intersecting the
/// first two distance circles leaves at most a point and its reflection
/// across the line through the two towers. Candidates are then filtered by
/// reproducing the entire signal set (same towers, same squared distances),
/// which implements the map-based disambiguation of the localization model.
pub fn localize(
    poly: &SimplePolygon,
    all_towers: &TowerSet,
    s: &SignalSet,
) -> Result<LocalizationResult, TrilaterationError> {
    let sigs: Vec<Signal> = s.iter().collect();
    match sigs.len() {
        0 => Ok(LocalizationResult::Underdetermined(ArcDescription::NoSignal)),
        1 => {
            let sig = &sigs[0];
            if sig.dist2.is_zero() {
                Ok(LocalizationResult::Unique(sig.pos.clone()))
            } else {
                Ok(LocalizationResult::Underdetermined(ArcDescription::Circle {
                    center: sig.pos.clone(),
                    dist2: sig.dist2.clone(),
                }))
            }
        }
        _ => {
            let t1 = &sigs[0];
            let t2 = &sigs[1];
            let candidates = circle_pair_candidates(t1, t2)
                .ok_or(TrilaterationError::InconsistentSignals)?;
            let mut survivors: Vec<Point> = Vec::new();
            for c in candidates {
                if poly.locate(&c) == PointLocation::Exterior {
                    continue;
                }
                let seen = visible_towers(poly, all_towers, &c)?;
                if seen == *s && !survivors.contains(&c) {
                    survivors.push(c);
                }
            }
            match survivors.len() {
                0 => Err(TrilaterationError::InconsistentSignals),
                1 => Ok(LocalizationResult::Unique(survivors.pop().unwrap())),
                _ => Ok(LocalizationResult::Ambiguous(survivors)),
            }
        }
    }
}

/// Intersection points of the two distance circles, when they are rational.
/// Signals produced by a rational agent position always are; anything else
/// is reported as inconsistent by the caller.
fn circle_pair_candidates(t1: &Signal, t2: &Signal) -> Option<Vec<Point>> {
    let ux = &t2.pos.x - &t1.pos.x;
    let uy = &t2.pos.y - &t1.pos.y;
    let len2 = &ux * &ux + &uy * &uy;
    if len2.is_zero() {
        return None;
    }
    // radical line: q = t1 + alpha*u + beta*perp(u)
    let alpha = (&t1.dist2 - &t2.dist2 + &len2) / (Rat::from_integer(BigInt::from(2)) * &len2);
    let beta2 = &t1.dist2 / &len2 - &alpha * &alpha;
    if beta2 < Rat::zero() {
        return None;
    }
    let beta = rational_sqrt(&beta2)?;
    let base_x = &t1.pos.x + &alpha * &ux;
    let base_y = &t1.pos.y + &alpha * &uy;
    let c1 = Point::new(&base_x - &beta * &uy, &base_y + &beta * &ux);
    let c2 = Point::new(&base_x + &beta * &uy, &base_y - &beta * &ux);
    if c1 == c2 {
        Some(vec![c1])
    } else {
        Some(vec![c1, c2])
    }
}

/// True iff `p` and `q` are distinct points that receive identical signal
/// sets, i.e. no localization algorithm can tell them apart.
pub fn indistinguishable(
    poly: &SimplePolygon,
    towers: &TowerSet,
    p: &Point,
    q: &Point,
) -> Result<bool, TrilaterationError> {
    if p == q {
        return Ok(false);
    }
    Ok(visible_towers(poly, towers, p)? == visible_towers(poly, towers, q)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn pr(xn: i64, xd: i64, yn: i64, yd: i64) -> Point {
        Point::new(rat(xn, xd), rat(yn, yd))
    }

    fn square() -> SimplePolygon {
        SimplePolygon::new(vec![p(0, 0), p(4, 0), p(4, 4), p(0, 4)]).unwrap()
    }

    fn towers(pts: &[(&str, Point)]) -> TowerSet {
        TowerSet::new(
            pts.iter()
                .map(|(l, p)| Tower::new(*l, p.clone()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn rejects_duplicate_tower_positions() {
        let err = TowerSet::new(vec![Tower::new("a", p(1, 1)), Tower::new("b", p(1, 1))]);
        assert!(matches!(
            err,
            Err(TrilaterationError::DuplicateTowerPosition(..))
        ));
    }

    #[test]
    fn visible_towers_in_convex_polygon_sees_all() {
        let sq = square();
        let ts = towers(&[("a", p(0, 0)), ("b", p(4, 0)), ("c", p(0, 4))]);
        let s = visible_towers(&sq, &ts, &p(2, 2)).unwrap();
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn tower_at_agent_gives_zero_distance() {
        let sq = square();
        let ts = towers(&[("a", p(2, 2))]);
        let s = visible_towers(&sq, &ts, &p(2, 2)).unwrap();
        let sig = s.iter().next().unwrap();
        assert!(sig.dist2.is_zero());
        assert_eq!(
            localize(&sq, &ts, &s).unwrap(),
            LocalizationResult::Unique(p(2, 2))
        );
    }

    #[test]
    fn visible_towers_blocked_by_notch() {
        let hex = SimplePolygon::new(vec![
            p(0, 0),
            p(2, 0),
            p(2, 1),
            p(1, 1),
            p(1, 2),
            p(0, 2),
        ])
        .unwrap();
        let ts = towers(&[("a", pr(7, 4, 3, 8))]);
        let s = visible_towers(&hex, &ts, &pr(3, 8, 7, 4)).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn three_noncollinear_towers_localize_uniquely() {
        let sq = square();
        let ts = towers(&[("a", p(0, 0)), ("b", p(4, 0)), ("c", p(0, 4))]);
        let agent = pr(5, 4, 7, 3);
        let s = visible_towers(&sq, &ts, &agent).unwrap();
        assert_eq!(
            localize(&sq, &ts, &s).unwrap(),
            LocalizationResult::Unique(agent)
        );
    }

    #[test]
    fn two_towers_on_edge_of_convex_polygon_disambiguate() {
        // both candidates reflect across the bottom edge; the mirror lies
        // outside, so the map disambiguates
        let sq = square();
        let ts = towers(&[("a", p(1, 0)), ("b", p(3, 0))]);
        let agent = pr(2, 1, 5, 2);
        let s = visible_towers(&sq, &ts, &agent).unwrap();
        assert_eq!(
            localize(&sq, &ts, &s).unwrap(),
            LocalizationResult::Unique(agent)
        );
    }

    #[test]
    fn single_tower_is_underdetermined() {
        let sq = square();
        let ts = towers(&[("a", p(0, 0))]);
        let agent = p(1, 2);
        let s = visible_towers(&sq, &ts, &agent).unwrap();
        match localize(&sq, &ts, &s).unwrap() {
            LocalizationResult::Underdetermined(ArcDescription::Circle { center, dist2 }) => {
                assert_eq!(center, p(0, 0));
                assert_eq!(dist2, rat_int(5));
            }
            other => panic!("expected underdetermined, got {:?}", other),
        }
    }

    #[test]
    fn symmetric_interior_towers_are_ambiguous() {
        // towers on the vertical center line of a square: the agent and its
        // mirror image receive identical signals
        let sq = square();
        let ts = towers(&[("a", p(2, 1)), ("b", p(2, 3))]);
        let agent = p(1, 2);
        let mirror = p(3, 2);
        assert!(indistinguishable(&sq, &ts, &agent, &mirror).unwrap());
        let s = visible_towers(&sq, &ts, &agent).unwrap();
        match localize(&sq, &ts, &s).unwrap() {
            LocalizationResult::Ambiguous(mut pts) => {
                pts.sort();
                assert_eq!(pts, vec![agent, mirror]);
            }
            other => panic!("expected ambiguous, got {:?}", other),
        }
    }

    #[test]
    fn indistinguishable_rejects_equal_points() {
        let sq = square();
        let ts = towers(&[("a", p(0, 0))]);
        assert!(!indistinguishable(&sq, &ts, &p(1, 1), &p(1, 1)).unwrap());
    }

    #[test]
    fn mirror_candidates_closed_under_reflection() {
        let t1 = Signal {
            label: "a".into(),
            pos: p(0, 0),
            dist2: rat_int(25),
        };
        let t2 = Signal {
            label: "b".into(),
            pos: p(8, 0),
            dist2: rat_int(25),
        };
        let cands = circle_pair_candidates(&t1, &t2).unwrap();
        assert_eq!(cands.len(), 2);
        let line = Line::through(&t1.pos, &t2.pos);
        assert_eq!(reflect_across_line(&cands[0], &line), cands[1]);
    }

    #[test]
    fn rational_sqrt_works() {
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
        assert_eq!(rational_sqrt(&rat_int(0)), Some(rat_int(0)));
    }
}
