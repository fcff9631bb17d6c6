//! Exhaustive minimal tower-set search over a finite candidate site set.
//!
//! This is the desk-scale oracle: sites are the gadget's named loci, and a
//! subset passes when every witness point localizes uniquely against it
//! under the exact mirror-candidate test. Independent of the certificate
//! pipeline: visibility here goes through raw segment containment.

use crate::geometry::*;
use crate::trilateration::{Tower, TowerSet};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("candidate site set too large for exhaustive search ({0} sites, max 64)")]
    TooManySites(usize),
    #[error("search budget exceeded after {0} leaf checks")]
    BudgetExceeded(usize),
    #[error("site {0:?} lies outside the polygon")]
    SiteOutside(String),
}

/// Finite set of named candidate tower positions.
#[derive(Debug, Clone)]
pub struct CandidateSiteSet {
    pub sites: Vec<(String, Point)>,
}

impl CandidateSiteSet {
    pub fn new(poly: &SimplePolygon, sites: Vec<(String, Point)>) -> Result<Self, SolveError> {
        if sites.len() > 64 {
            return Err(SolveError::TooManySites(sites.len()));
        }
        for (name, p) in &sites {
            if poly.locate(p) == PointLocation::Exterior {
                return Err(SolveError::SiteOutside(name.clone()));
            }
        }
        Ok(CandidateSiteSet { sites })
    }
}

struct MirrorEntry {
    /// Visibility mask of the mirror point over all sites.
    vis: u64,
    /// Sites equidistant (squared) from witness and mirror.
    dist_eq: u64,
}

struct Search<'a> {
    poly: &'a SimplePolygon,
    sites: &'a [(String, Point)],
    witnesses: &'a [Point],
    /// site-sees-witness incidence, one mask per witness
    coverers: Vec<u64>,
    /// witness coincides with site index, if any
    at_site: Vec<Option<usize>>,
    mirror_cache: HashMap<(usize, usize, usize), Option<MirrorEntry>>,
    leaf_budget: usize,
    leaves: usize,
}

impl<'a> Search<'a> {
    fn mirror_entry(&mut self, wi: usize, s1: usize, s2: usize) -> &Option<MirrorEntry> {
        if !self.mirror_cache.contains_key(&(wi, s1, s2)) {
            let w = &self.witnesses[wi];
            let line = Line::through(&self.sites[s1].1, &self.sites[s2].1);
            let m = reflect_across_line(w, &line);
            let entry = if m == *w || self.poly.locate(&m) == PointLocation::Exterior {
                None
            } else {
                let mut vis = 0u64;
                let mut dist_eq = 0u64;
                for (si, (_, sp)) in self.sites.iter().enumerate() {
                    if segment_in_polygon(self.poly, sp, &m).unwrap_or(false) {
                        vis |= 1 << si;
                    }
                    if sp.dist2(w) == sp.dist2(&m) {
                        dist_eq |= 1 << si;
                    }
                }
                Some(MirrorEntry { vis, dist_eq })
            };
            self.mirror_cache.insert((wi, s1, s2), entry);
        }
        &self.mirror_cache[&(wi, s1, s2)]
    }

    /// Does the chosen subset localize every witness uniquely?
    fn subset_passes(&mut self, mask: u64) -> Result<bool, SolveError> {
        self.leaves += 1;
        if self.leaves > self.leaf_budget {
            return Err(SolveError::BudgetExceeded(self.leaves));
        }
        for wi in 0..self.witnesses.len() {
            let vis = self.coverers[wi] & mask;
            let count = vis.count_ones();
            if count == 0 {
                return Ok(false);
            }
            if count == 1 {
                let si = vis.trailing_zeros() as usize;
                // a single signal pins the agent only at the tower itself
                if self.at_site[wi] != Some(si) {
                    return Ok(false);
                }
                continue;
            }
            let s1 = vis.trailing_zeros() as usize;
            let s2 = (vis & !(1 << s1)).trailing_zeros() as usize;
            match self.mirror_entry(wi, s1, s2) {
                None => {}
                Some(entry) => {
                    let same_set = (entry.vis & mask) == vis;
                    let same_dist = (entry.dist_eq & vis) == vis;
                    if same_set && same_dist {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Smallest subset of `sites` (ties broken lexicographically by site order)
/// that localizes every witness, or `None` if no subset of size at most
/// `max_k` works.
pub fn solve_small(
    poly: &SimplePolygon,
    sites: &CandidateSiteSet,
    witnesses: &[Point],
    max_k: usize,
    leaf_budget: usize,
) -> Result<Option<TowerSet>, SolveError> {
    let ns = sites.sites.len();
    let mut coverers = vec![0u64; witnesses.len()];
    let mut at_site = vec![None; witnesses.len()];
    let search_sites = &sites.sites;
    for (wi, w) in witnesses.iter().enumerate() {
        for si in 0..ns {
            if search_sites[si].1 == *w {
                at_site[wi] = Some(si);
            }
            if segment_in_polygon(poly, &search_sites[si].1, w).unwrap_or(false) {
                coverers[wi] |= 1 << si;
            }
        }
    }
    let mut search = Search {
        poly,
        sites: search_sites,
        witnesses,
        coverers,
        at_site,
        mirror_cache: HashMap::new(),
        leaf_budget,
        leaves: 0,
    };

    for k in 0..=max_k.min(ns) {
        let mut chosen: Vec<usize> = Vec::with_capacity(k);
        if let Some(mask) = dfs(&mut search, &mut chosen, 0, k)? {
            let towers: Vec<Tower> = (0..ns)
                .filter(|si| mask & (1 << si) != 0)
                .map(|si| Tower::new(search_sites[si].0.clone(), search_sites[si].1.clone()))
                .collect();
            return Ok(Some(
                TowerSet::new(towers).expect("distinct sites make a valid tower set"),
            ));
        }
    }
    Ok(None)
}

fn dfs(
    search: &mut Search<'_>,
    chosen: &mut Vec<usize>,
    start: usize,
    k: usize,
) -> Result<Option<u64>, SolveError> {
    if chosen.len() == k {
        let mask = chosen.iter().fold(0u64, |m, &s| m | (1 << s));
        return if search.subset_passes(mask)? {
            Ok(Some(mask))
        } else {
            Ok(None)
        };
    }
    let ns = search.sites.len();
    // prune: every witness must still be able to reach 2 coverers
    let chosen_mask = chosen.iter().fold(0u64, |m, &s| m | (1 << s));
    let future_mask: u64 = if start >= ns {
        0
    } else {
        (!0u64 >> (64 - ns)) & !((1u64 << start) - 1)
    };
    for wi in 0..search.witnesses.len() {
        let have = (search.coverers[wi] & chosen_mask).count_ones();
        let possible = have + (search.coverers[wi] & future_mask).count_ones();
        let need = if search.at_site[wi].is_some() { 1 } else { 2 };
        if possible < need {
            return Ok(None);
        }
    }
    for s in start..ns {
        if ns - s < k - chosen.len() {
            break;
        }
        chosen.push(s);
        if let Some(mask) = dfs(search, chosen, s + 1, k)? {
            return Ok(Some(mask));
        }
        chosen.pop();
    }
    Ok(None)
}
