use std::collections::BTreeMap;
use std::fmt;

use super::crossing::Crossing;
use super::BendError;

/// One pass of the curve through a crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Visit {
    pub label: usize,
    pub over: bool,
    pub sign: i8,
}

/// Ordered crossing visits along the curve. On a closed curve the sequence
/// is cyclic, so its last and first visits are neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GaussCode {
    pub visits: Vec<Visit>,
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimplifyStats {
    /// Crossings removed by move I (loops).
    pub loop_crossings: usize,
    /// Crossings removed by move II, two per move.
    pub tangle_crossings: usize,
}

impl SimplifyStats {
    pub fn removed(&self) -> usize {
        self.loop_crossings + self.tangle_crossings
    }
}

impl GaussCode {
    pub fn crossing_count(&self) -> usize {
        self.visits.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.visits.is_empty()
    }

    /// Each label must appear exactly twice, once over and once under, with
    /// the same sign both times.
    pub fn check(&self) -> Result<(), BendError> {
        let mut seen: BTreeMap<usize, Vec<Visit>> = BTreeMap::new();
        for v in &self.visits {
            if v.sign != 1 && v.sign != -1 {
                return Err(BendError::InvalidGauss(format!(
                    "crossing {} has sign {}",
                    v.label, v.sign
                )));
            }
            seen.entry(v.label).or_default().push(*v);
        }
        for (label, visits) in seen {
            let ok = visits.len() == 2
                && visits[0].over != visits[1].over
                && visits[0].sign == visits[1].sign;
            if !ok {
                return Err(BendError::InvalidGauss(format!(
                    "crossing {label} must be visited once over and once under with one sign"
                )));
            }
        }
        Ok(())
    }

    /// Parses the display form, e.g. `O0+ U1- O1- U0+`.
    pub fn parse(text: &str, closed: bool) -> Result<GaussCode, BendError> {
        let visits = text
            .split_whitespace()
            .map(|tok| {
                let bad = || BendError::InvalidGauss(format!("bad visit `{tok}`"));
                let over = match tok.as_bytes().first() {
                    Some(b'O') => true,
                    Some(b'U') => false,
                    _ => return Err(bad()),
                };
                let sign = match tok.as_bytes().last() {
                    Some(b'+') => 1,
                    Some(b'-') => -1,
                    _ => return Err(bad()),
                };
                let label = tok
                    .get(1..tok.len() - 1)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(bad)?;
                Ok(Visit { label, over, sign })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let code = GaussCode { visits, closed };
        code.check()?;
        Ok(code)
    }

    fn neighbour(&self, i: usize) -> Option<usize> {
        let n = self.visits.len();
        if i + 1 < n {
            Some(i + 1)
        } else if self.closed && n > 1 {
            Some(0)
        } else {
            None
        }
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        self.neighbour(i) == Some(j) || self.neighbour(j) == Some(i)
    }

    fn partner(&self, i: usize) -> usize {
        let label = self.visits[i].label;
        (0..self.visits.len())
            .find(|&j| j != i && self.visits[j].label == label)
            .expect("every label is visited twice")
    }

    /// Positions removed by the first move I, scanning left to right.
    fn find_loop(&self) -> Option<[usize; 2]> {
        (0..self.visits.len()).find_map(|i| {
            let j = self.neighbour(i)?;
            (i != j && self.visits[i].label == self.visits[j].label).then_some([i, j])
        })
    }

    /// Positions removed by the first move II: two neighbouring visits on
    /// the same strand whose partners are also neighbours, with opposite
    /// signs.
    fn find_tangle(&self) -> Option<[usize; 4]> {
        (0..self.visits.len()).find_map(|i| {
            let j = self.neighbour(i)?;
            let (a, b) = (self.visits[i], self.visits[j]);
            if a.label == b.label || a.over != b.over || a.sign == b.sign {
                return None;
            }
            let (pa, pb) = (self.partner(i), self.partner(j));
            self.adjacent(pa, pb).then_some([i, j, pa, pb])
        })
    }

    fn remove(&mut self, positions: &[usize]) {
        let mut index = 0;
        self.visits.retain(|_| {
            index += 1;
            !positions.contains(&(index - 1))
        });
    }

    /// Applies moves I and II until neither applies, taking move I first
    /// on every pass.
    pub fn simplify(&self) -> (GaussCode, SimplifyStats) {
        let mut code = self.clone();
        let mut stats = SimplifyStats::default();
        loop {
            if let Some(pos) = code.find_loop() {
                code.remove(&pos);
                stats.loop_crossings += 1;
            } else if let Some(pos) = code.find_tangle() {
                code.remove(&pos);
                stats.tangle_crossings += 2;
            } else {
                return (code, stats);
            }
        }
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.visits.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let side = if v.over { 'O' } else { 'U' };
            let sign = if v.sign > 0 { '+' } else { '-' };
            write!(f, "{side}{}{sign}", v.label)?;
        }
        Ok(())
    }
}

/// Crossings of a projected curve together with their Gauss sequence.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CrossingDiagram {
    /// Ordered by label.
    pub crossings: Vec<Crossing>,
    pub gauss: GaussCode,
}

impl CrossingDiagram {
    pub fn simplify_with_stats(&self) -> (CrossingDiagram, SimplifyStats) {
        let (gauss, stats) = self.gauss.simplify();
        let crossings = self
            .crossings
            .iter()
            .filter(|c| gauss.visits.iter().any(|v| v.label == c.label))
            .copied()
            .collect();
        (CrossingDiagram { crossings, gauss }, stats)
    }
}

/// Removes loops and cancelling pairs; the surviving crossings keep their
/// labels. Move II only looks at neighbouring visits in the sequence, so
/// some geometrically removable pairs stay.
pub fn simplify(diagram: &CrossingDiagram) -> CrossingDiagram {
    diagram.simplify_with_stats().0
}
