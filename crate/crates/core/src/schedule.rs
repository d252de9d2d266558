//! Recoloring schedules: walks in `R_k(G)` given as single-vertex steps.

use serde::Serialize;

use crate::coloring::{is_proper, Color, Coloring};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecoloringSchedule {
    pub start: Coloring,
    /// `(vertex, new color)` in order.
    pub steps: Vec<(usize, Color)>,
}

impl RecoloringSchedule {
    pub fn new(start: Coloring) -> Self {
        RecoloringSchedule {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn k(&self) -> Color {
        self.start.k()
    }

    pub fn push(&mut self, v: usize, c: Color) {
        self.steps.push((v, c));
    }

    /// Final coloring, without validation.
    pub fn end(&self) -> Coloring {
        let mut c = self.start.clone();
        for &(v, x) in &self.steps {
            c.set(v, x);
        }
        c
    }

    /// Replays every step on `g`, checking that the start is proper and that
    /// each step changes one vertex to a different in-range color that no
    /// neighbour holds. Returns the final coloring.
    pub fn replay(&self, g: &Graph) -> Result<Coloring> {
        if !is_proper(g, &self.start)? {
            return Err(Error::ImproperEndpoint);
        }
        let k = self.k();
        let mut cur = self.start.clone();
        for (i, &(v, c)) in self.steps.iter().enumerate() {
            let bad = |reason: String| Error::InvalidSchedule { step: i, reason };
            if v >= g.n() {
                return Err(bad(format!("vertex {v} out of range")));
            }
            if c == 0 || c > k {
                return Err(bad(format!("color {c} outside 1..={k}")));
            }
            if cur.get(v) == c {
                return Err(bad(format!("vertex {v} already has color {c}")));
            }
            if let Some(u) = g.neighbors(v).iter().find(|&u| cur.get(u) == c) {
                return Err(bad(format!("neighbour {u} of {v} already has color {c}")));
            }
            cur.set(v, c);
        }
        Ok(cur)
    }

    /// Replays and additionally checks the endpoint.
    pub fn validate(&self, g: &Graph, target: &Coloring) -> Result<()> {
        let end = self.replay(g)?;
        if end.as_slice() != target.as_slice() {
            return Err(Error::InvalidSchedule {
                step: self.len(),
                reason: format!("ends at {:?}, expected {:?}", end.as_slice(), target.as_slice()),
            });
        }
        Ok(())
    }

    /// The same walk traversed backwards.
    pub fn reversed(&self) -> RecoloringSchedule {
        let mut cur = self.start.clone();
        let mut undo = Vec::with_capacity(self.len());
        for &(v, c) in &self.steps {
            undo.push((v, cur.get(v)));
            cur.set(v, c);
        }
        undo.reverse();
        RecoloringSchedule {
            start: cur,
            steps: undo,
        }
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn concat(mut self, other: &RecoloringSchedule) -> Result<RecoloringSchedule> {
        if self.end().as_slice() != other.start.as_slice() {
            return Err(Error::PreconditionViolated(
                "schedules do not meet: second start differs from first end".into(),
            ));
        }
        self.steps.extend_from_slice(&other.steps);
        Ok(self)
    }

    /// Appends raw steps.
    pub fn extend(&mut self, steps: impl IntoIterator<Item = (usize, Color)>) {
        self.steps.extend(steps);
    }
}
