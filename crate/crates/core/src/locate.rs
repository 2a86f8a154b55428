//! Directed local search: pick candidate elements whose centroid keys are
//! closest to the query point's key, then walk the face graph along the
//! centroid→point ray until an element contains the point.
//!
//! A walk can fail (step limit, leaving the domain through the surface, or a
//! cycle broken by the anti-bounce guard); the next candidate is then tried,
//! and finally a full scan when fallback is enabled. Whatever route finds the
//! answer, a returned element always passes the containment test.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    exit_face_outside, faces_by_cone_score, solve_barycentric, FaceHit, Point3, TetCorners,
    Tolerance,
};
use crate::mesh::Mesh;
use crate::model::{ElemId, BOUNDARY};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocatorConfig {
    pub tolerance: Tolerance,
    /// Per-walk step budget; `None` means `10 * ceil(n^(1/3)) + 100`.
    pub max_steps: Option<usize>,
    /// How many nearest-key elements to try as walk starts.
    pub candidate_fanout: usize,
    /// Scan every element when all walks fail.
    pub fallback_enabled: bool,
}

impl Default for LocatorConfig {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::default(),
            max_steps: None,
            candidate_fanout: 4,
            fallback_enabled: true,
        }
    }
}

impl LocatorConfig {
    pub fn check(&self) -> Result<()> {
        if self.candidate_fanout == 0 {
            return Err(Error::InvalidArgument(
                "candidate fanout must be >= 1".into(),
            ));
        }
        if self.max_steps == Some(0) {
            return Err(Error::InvalidArgument("max steps must be >= 1".into()));
        }
        Ok(())
    }

    pub fn max_steps_for(&self, n_tets: usize) -> usize {
        self.max_steps
            .unwrap_or_else(|| 10 * ceil_cbrt(n_tets) + 100)
    }
}

fn ceil_cbrt(n: usize) -> usize {
    let mut r = (n as f64).cbrt().round() as usize;
    while r * r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocateResult {
    /// Containing element, or -1.
    pub elem_id: ElemId,
    /// Face crossings of the successful walk.
    pub steps: usize,
    /// First candidate tried, or -1 if the point was rejected up front.
    pub candidate_elem: ElemId,
    pub used_fallback: bool,
}

impl LocateResult {
    pub fn is_found(&self) -> bool {
        self.elem_id != BOUNDARY
    }

    fn not_found(candidate_elem: ElemId) -> Self {
        Self {
            elem_id: BOUNDARY,
            steps: 0,
            candidate_elem,
            used_fallback: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchResult {
    /// One result per input point, in input order.
    pub results: Vec<LocateResult>,
    /// Number of distinct elements found, excluding -1.
    pub distinct: usize,
}

enum Step {
    To(usize),
    Exit,
    Stuck,
}

impl Mesh {
    /// Up to `fanout` elements whose centroid codes are nearest (by absolute
    /// code difference) to the code of `p`.
    pub fn select_candidates(&self, p: Point3, fanout: usize) -> Result<Vec<ElemId>> {
        Ok(self
            .candidate_slots(p, fanout)?
            .into_iter()
            .map(|s| self.tables.elem_ids[s])
            .collect())
    }

    fn candidate_slots(&self, p: Point3, fanout: usize) -> Result<Vec<usize>> {
        let sorted = &self.hilbert.sorted;
        if sorted.is_empty() {
            return Err(Error::EmptyMesh);
        }
        let (code, _) = self.hilbert.quantizer.code_of(p)?;
        let target = code.value();
        let mut hi = sorted.partition_point(|&(c, _)| c < target);
        let mut lo = hi;
        let mut out = Vec::with_capacity(fanout.min(sorted.len()));
        while out.len() < fanout && (lo > 0 || hi < sorted.len()) {
            let take_hi = match (lo > 0, hi < sorted.len()) {
                (true, true) => sorted[hi].0 - target <= target - sorted[lo - 1].0,
                (false, true) => true,
                _ => false,
            };
            if take_hi {
                out.push(sorted[hi].1 as usize);
                hi += 1;
            } else {
                lo -= 1;
                out.push(sorted[lo].1 as usize);
            }
        }
        Ok(out)
    }

    /// Walks from `start` toward `p`.
    ///
    /// Fails with [`Error::StepLimit`], [`Error::DomainExit`] or
    /// [`Error::TraversalStuck`] when this start does not lead to `p`.
    pub fn traverse(&self, start: ElemId, p: Point3, cfg: &LocatorConfig) -> Result<LocateResult> {
        cfg.check()?;
        let slot = self.slot_of(start)?;
        let (found, steps) = self.walk(slot, p, cfg)?;
        Ok(LocateResult {
            elem_id: self.tables.elem_ids[found],
            steps,
            candidate_elem: start,
            used_fallback: false,
        })
    }

    fn walk(&self, start: usize, p: Point3, cfg: &LocatorConfig) -> Result<(usize, usize)> {
        let tol = cfg.tolerance;
        let max_steps = cfg.max_steps_for(self.tet_count());
        let mut current = start;
        let mut previous: Option<usize> = None;
        let mut steps = 0;
        loop {
            let t = self.corners_at(current);
            if solve_barycentric(&t, p)?.is_inside(tol) {
                return Ok((current, steps));
            }
            if steps >= max_steps {
                return Err(Error::StepLimit {
                    start: self.tables.elem_ids[start],
                    steps,
                });
            }
            match self.next_step(current, &t, p, tol, previous)? {
                Step::To(next) => {
                    previous = Some(current);
                    current = next;
                    steps += 1;
                }
                Step::Exit => {
                    return Err(Error::DomainExit {
                        elem_id: self.tables.elem_ids[current],
                        steps,
                    })
                }
                Step::Stuck => {
                    return Err(Error::TraversalStuck {
                        elem_id: self.tables.elem_ids[current],
                    })
                }
            }
        }
    }

    fn next_step(
        &self,
        current: usize,
        t: &TetCorners,
        p: Point3,
        tol: Tolerance,
        previous: Option<usize>,
    ) -> Result<Step> {
        if let Some(FaceHit::Face(f)) = exit_face_outside(t, p, tol) {
            match self.neighbor_slot(current, f as usize)? {
                None => return Ok(Step::Exit),
                Some(n) if Some(n) != previous => return Ok(Step::To(n)),
                Some(_) => {}
            }
        }
        // The ray points back where we came from (or no cone matched): take
        // the face that comes closest to containing the ray, never the one
        // we just crossed.
        for (f, _) in faces_by_cone_score(t, p) {
            match self.neighbor_slot(current, f as usize)? {
                Some(n) if Some(n) == previous => continue,
                Some(n) => return Ok(Step::To(n)),
                None => return Ok(Step::Exit),
            }
        }
        Ok(Step::Stuck)
    }

    /// First element, in id order, whose tolerant containment test passes.
    pub fn locate_brute_force(&self, p: Point3, tol: Tolerance) -> Result<Option<ElemId>> {
        for slot in 0..self.tet_count() {
            if solve_barycentric(&self.corners_at(slot), p)?.is_inside(tol) {
                return Ok(Some(self.tables.elem_ids[slot]));
            }
        }
        Ok(None)
    }

    /// Finds an element containing `p`, or -1 if none does.
    pub fn locate(&self, p: Point3, cfg: &LocatorConfig) -> Result<LocateResult> {
        cfg.check()?;
        if !self.bounding_box().contains(p) {
            return Ok(LocateResult::not_found(BOUNDARY));
        }
        let candidates = self.candidate_slots(p, cfg.candidate_fanout)?;
        let first = self.tables.elem_ids[candidates[0]];
        for &start in &candidates {
            match self.walk(start, p, cfg) {
                Ok((slot, steps)) => {
                    return Ok(LocateResult {
                        elem_id: self.tables.elem_ids[slot],
                        steps,
                        candidate_elem: first,
                        used_fallback: false,
                    })
                }
                Err(
                    Error::StepLimit { .. }
                    | Error::DomainExit { .. }
                    | Error::TraversalStuck { .. },
                ) => {}
                Err(e) => return Err(e),
            }
        }
        if cfg.fallback_enabled {
            if let Some(elem_id) = self.locate_brute_force(p, cfg.tolerance)? {
                return Ok(LocateResult {
                    elem_id,
                    steps: 0,
                    candidate_elem: first,
                    used_fallback: true,
                });
            }
        }
        Ok(LocateResult::not_found(first))
    }

    /// Locates every point in parallel on the current rayon pool. Results
    /// keep input order whatever the worker count.
    pub fn locate_batch(&self, points: &[Point3], cfg: &LocatorConfig) -> Result<BatchResult> {
        let results: Vec<LocateResult> = points
            .par_iter()
            .map(|&p| self.locate(p, cfg))
            .collect::<Result<_>>()?;
        let distinct = distinct_elements(&results);
        Ok(BatchResult { results, distinct })
    }
}

pub fn distinct_elements(results: &[LocateResult]) -> usize {
    results
        .iter()
        .filter(|r| r.is_found())
        .map(|r| r.elem_id)
        .collect::<HashSet<_>>()
        .len()
}
