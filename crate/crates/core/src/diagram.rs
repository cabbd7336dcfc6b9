//! Oriented planar diagram codes for pretzel links.
//!
//! A diagram is a 4-valent planar graph. Every crossing has four slots in
//! counterclockwise order `SW, SE, NE, NW`; opposite slots belong to the same
//! strand. Edges run between slots and carry an orientation (tail to head).
//! Crossing-free closed components are only counted.
//!
//! Generated diagrams lay the bands out left to right with crossings stacked
//! top to bottom inside each band. Crossings are kept in that order through
//! every local operation, and edge ids are reassigned by scanning crossings
//! in order and slots `NW, NE, SW, SE`, so equal pretzel structures produce
//! equal codes.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::pretzel::TwistVector;

pub type CrossingId = usize;
pub type EdgeId = usize;

pub const SW: usize = 0;
pub const SE: usize = 1;
pub const NE: usize = 2;
pub const NW: usize = 3;

const SCAN_ORDER: [usize; 4] = [NW, NE, SW, SE];

/// One slot of one crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Port {
    pub crossing: CrossingId,
    pub slot: usize,
}

impl Port {
    fn new(crossing: CrossingId, slot: usize) -> Self {
        Port { crossing, slot }
    }

    fn through(self) -> Port {
        Port::new(self.crossing, (self.slot + 2) % 4)
    }
}

/// Which diagonal strand passes over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OverStrand {
    /// The strand through `SW` and `NE`.
    SwNe,
    /// The strand through `SE` and `NW`.
    SeNw,
}

impl OverStrand {
    fn flipped(self) -> Self {
        match self {
            OverStrand::SwNe => OverStrand::SeNw,
            OverStrand::SeNw => OverStrand::SwNe,
        }
    }
}

/// Half-twist chirality. A band entry `p > 0` is drawn with the `SE`-`NW`
/// strand on top; this choice makes `P(1,1,1)` all-positive.
const POSITIVE_TWIST: OverStrand = OverStrand::SeNw;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub slots: [EdgeId; 4],
    pub over: OverStrand,
    /// Zero-based band the crossing was generated in.
    pub band: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub tail: Port,
    pub head: Port,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    edges: Vec<Edge>,
    free_loops: usize,
}

impl Diagram {
    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Closed components that meet no crossing.
    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// Crossings of band `band` (zero-based), top to bottom.
    pub fn band_crossings(&self, band: usize) -> Vec<CrossingId> {
        (0..self.crossings.len())
            .filter(|&c| self.crossings[c].band == band)
            .collect()
    }

    fn edge_at(&self, port: Port) -> EdgeId {
        self.crossings[port.crossing].slots[port.slot]
    }

    fn is_incoming(&self, port: Port) -> bool {
        self.edges[self.edge_at(port)].head == port
    }

    fn incoming_slot(&self, c: CrossingId, parity: usize) -> usize {
        if self.is_incoming(Port::new(c, parity)) {
            parity
        } else {
            parity + 2
        }
    }

    fn check(&self, c: CrossingId) -> Result<()> {
        if c < self.crossings.len() {
            Ok(())
        } else {
            Err(Error::UnknownCrossing(c))
        }
    }

    /// Incoming slots `(over, under)` at crossing `c`.
    pub(crate) fn incoming_slots(&self, c: CrossingId) -> (usize, usize) {
        let (over_parity, under_parity) = match self.crossings[c].over {
            OverStrand::SwNe => (0, 1),
            OverStrand::SeNw => (1, 0),
        };
        (
            self.incoming_slot(c, over_parity),
            self.incoming_slot(c, under_parity),
        )
    }

    /// Sign of crossing `c`: `+1` when the over strand passes from the right
    /// of the under strand to its left.
    pub fn sign(&self, c: CrossingId) -> Result<i64> {
        self.check(c)?;
        let (over_in, under_in) = self.incoming_slots(c);
        Ok(if over_in == (under_in + 3) % 4 { 1 } else { -1 })
    }

    pub fn signs(&self) -> Vec<i64> {
        (0..self.crossings.len())
            .map(|c| self.sign(c).expect("crossing in range"))
            .collect()
    }

    pub fn writhe(&self) -> i64 {
        self.signs().iter().sum()
    }

    /// Component index of every edge, plus the number of traced components
    /// (free loops excluded).
    fn edge_components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.edges.len()];
        let mut count = 0;
        for start in 0..self.edges.len() {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut e = start;
            loop {
                comp[e] = count;
                e = self.edge_at(self.edges[e].head.through());
                if e == start {
                    break;
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn component_count(&self) -> usize {
        self.edge_components().1 + self.free_loops
    }

    /// Half the signed count of crossings between the two components.
    pub fn linking_number(&self) -> Result<i64> {
        let found = self.component_count();
        if found != 2 {
            return Err(Error::ComponentCount { expected: 2, found });
        }
        let (comp, _) = self.edge_components();
        let mut twice = 0;
        for c in 0..self.crossings.len() {
            let slots = self.crossings[c].slots;
            if comp[slots[0]] != comp[slots[1]] {
                twice += self.sign(c)?;
            }
        }
        if twice % 2 != 0 {
            return Err(Error::Invariant(format!(
                "odd inter-component sign sum {twice}"
            )));
        }
        Ok(twice / 2)
    }

    /// Flips the over/under information at `c`; orientation is unchanged.
    pub fn switch_crossing(&self, c: CrossingId) -> Result<Diagram> {
        self.check(c)?;
        let mut d = self.clone();
        d.crossings[c].over = d.crossings[c].over.flipped();
        Ok(d)
    }

    /// Oriented smoothing at `c`: each incoming strand is joined to the
    /// outgoing slot next to it.
    pub fn smooth_crossing(&self, c: CrossingId) -> Result<Diagram> {
        self.check(c)?;
        let a = self.incoming_slot(c, 0);
        let b = self.incoming_slot(c, 1);
        let mut pass = HashMap::new();
        pass.insert(Port::new(c, a), Port::new(c, (b + 2) % 4));
        pass.insert(Port::new(c, b), Port::new(c, (a + 2) % 4));
        Ok(self.splice(&pass))
    }

    /// Removes adjacent half-twist pairs in one band that cancel by a second
    /// Reidemeister move, until none is left.
    pub fn reduce_band(&self) -> Diagram {
        let mut d = self.clone();
        while let Some(upper) = d.cancelling_pair() {
            let mut pass = HashMap::new();
            for c in [upper, upper + 1] {
                for slot in 0..4 {
                    let port = Port::new(c, slot);
                    pass.insert(port, port.through());
                }
            }
            d = d.splice(&pass);
        }
        d
    }

    fn cancelling_pair(&self) -> Option<CrossingId> {
        (0..self.crossings.len().saturating_sub(1)).find(|&c| {
            let (up, down) = (&self.crossings[c], &self.crossings[c + 1]);
            let stacked = up.band == down.band
                && up.slots[SW] == down.slots[NW]
                && up.slots[SE] == down.slots[NE]
                && up.slots[SW] != up.slots[SE];
            stacked && up.over != down.over && {
                debug_assert_eq!(self.sign(c).ok(), self.sign(c + 1).ok().map(|s| -s));
                true
            }
        })
    }

    /// Deletes every crossing named in `pass` and reconnects strands: an
    /// edge arriving at a deleted port `p` continues out of `pass[p]`.
    fn splice(&self, pass: &HashMap<Port, Port>) -> Diagram {
        let removed = |c: CrossingId| pass.keys().any(|p| p.crossing == c);
        let mut new_id = vec![usize::MAX; self.crossings.len()];
        let mut kept = Vec::new();
        for c in 0..self.crossings.len() {
            if !removed(c) {
                new_id[c] = kept.len();
                kept.push(c);
            }
        }
        let remap = |p: Port| Port::new(new_id[p.crossing], p.slot);

        let mut visited = vec![false; self.edges.len()];
        let mut edges = Vec::new();
        for &c in &kept {
            for slot in 0..4 {
                let e = self.crossings[c].slots[slot];
                if visited[e] || self.edges[e].tail != Port::new(c, slot) {
                    continue;
                }
                let mut cur = e;
                let head = loop {
                    visited[cur] = true;
                    let h = self.edges[cur].head;
                    match pass.get(&h) {
                        None => break h,
                        Some(&out) => cur = self.edge_at(out),
                    }
                };
                edges.push(Edge {
                    tail: remap(Port::new(c, slot)),
                    head: remap(head),
                });
            }
        }
        let mut free_loops = self.free_loops;
        for start in 0..self.edges.len() {
            if visited[start] {
                continue;
            }
            let mut cur = start;
            while !visited[cur] {
                visited[cur] = true;
                let h = self.edges[cur].head;
                cur = self.edge_at(pass[&h]);
            }
            free_loops += 1;
        }

        let crossings = kept
            .iter()
            .map(|&c| Crossing {
                slots: [0; 4],
                over: self.crossings[c].over,
                band: self.crossings[c].band,
            })
            .collect::<Vec<_>>();
        let mut d = Diagram {
            crossings,
            edges: Vec::new(),
            free_loops,
        };
        for (id, edge) in edges.iter().enumerate() {
            d.crossings[edge.tail.crossing].slots[edge.tail.slot] = id;
            d.crossings[edge.head.crossing].slots[edge.head.slot] = id;
        }
        d.edges = edges;
        d.relabel();
        d
    }

    /// Renumbers edges by first appearance in the canonical scan.
    fn relabel(&mut self) {
        if self.edges.is_empty() {
            return;
        }
        let mut new_id = vec![usize::MAX; self.edges.len()];
        let mut next = 0;
        for c in 0..self.crossings.len() {
            for slot in SCAN_ORDER {
                let e = self.crossings[c].slots[slot];
                if new_id[e] == usize::MAX {
                    new_id[e] = next;
                    next += 1;
                }
            }
        }
        let mut edges = vec![self.edges[0]; self.edges.len()];
        for (old, edge) in self.edges.iter().enumerate() {
            edges[new_id[old]] = *edge;
        }
        for crossing in &mut self.crossings {
            for e in crossing.slots.iter_mut() {
                *e = new_id[*e];
            }
        }
        self.edges = edges;
    }

    /// PD-style text: one `X(a,b,c,d,±)` line per crossing, slots listed
    /// counterclockwise from the incoming under-strand.
    pub fn to_pd(&self) -> String {
        let mut out = String::new();
        for c in 0..self.crossings.len() {
            let (_, start) = self.incoming_slots(c);
            let s = self.crossings[c].slots;
            let sign = if self.sign(c).expect("in range") > 0 { '+' } else { '-' };
            out.push_str(&format!(
                "X({},{},{},{},{})\n",
                s[start],
                s[(start + 1) % 4],
                s[(start + 2) % 4],
                s[(start + 3) % 4],
                sign
            ));
        }
        if self.free_loops > 0 {
            out.push_str(&format!("O({})\n", self.free_loops));
        }
        out
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd())
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum End {
    Top,
    Bottom,
}

#[derive(Clone, Copy)]
enum Attach {
    Port(Port),
    Segment(usize, End),
}

/// Standard pretzel diagram: `n` vertical twist regions joined pairwise at
/// top and bottom, with the outer ends of the first and last band closed
/// around the outside.
pub fn build_diagram(v: &TwistVector) -> Diagram {
    let twists = v.entries();
    let n = twists.len();
    let heights: Vec<usize> = twists.iter().map(|p| p.unsigned_abs() as usize).collect();

    let mut crossing_base = Vec::with_capacity(n);
    let mut seg_base = Vec::with_capacity(n);
    let (mut c_total, mut s_total) = (0, 0);
    for &h in &heights {
        crossing_base.push(c_total);
        seg_base.push(s_total);
        c_total += h;
        s_total += 2 * (h + 1);
    }
    // segment (band, level, right?) lies between crossing level-1 and level
    let seg = |band: usize, level: usize, right: bool| seg_base[band] + 2 * level + right as usize;
    let crossing = |band: usize, level: usize| crossing_base[band] + level;

    let mut attach = vec![[Attach::Port(Port::new(0, 0)); 2]; s_total];
    let end_index = |e: End| (e == End::Bottom) as usize;
    for band in 0..n {
        let h = heights[band];
        for level in 0..=h {
            for right in [false, true] {
                let s = seg(band, level, right);
                if level > 0 {
                    let slot = if right { SE } else { SW };
                    attach[s][0] = Attach::Port(Port::new(crossing(band, level - 1), slot));
                }
                if level < h {
                    let slot = if right { NE } else { NW };
                    attach[s][1] = Attach::Port(Port::new(crossing(band, level), slot));
                }
            }
        }
        let next = (band + 1) % n;
        let top_right = seg(band, 0, true);
        let top_left = seg(next, 0, false);
        attach[top_right][0] = Attach::Segment(top_left, End::Top);
        attach[top_left][0] = Attach::Segment(top_right, End::Top);
        let bottom_right = seg(band, h, true);
        let bottom_left = seg(next, heights[next], false);
        attach[bottom_right][1] = Attach::Segment(bottom_left, End::Bottom);
        attach[bottom_left][1] = Attach::Segment(bottom_right, End::Bottom);
    }

    let mut port_seg = HashMap::new();
    for (s, ends) in attach.iter().enumerate() {
        for (i, a) in ends.iter().enumerate() {
            if let Attach::Port(p) = a {
                let end = if i == 0 { End::Top } else { End::Bottom };
                port_seg.insert(*p, (s, end));
            }
        }
    }

    let mut crossings: Vec<Crossing> = (0..n)
        .flat_map(|band| {
            let over = if twists[band] > 0 {
                POSITIVE_TWIST
            } else {
                POSITIVE_TWIST.flipped()
            };
            (0..heights[band]).map(move |_| Crossing {
                slots: [usize::MAX; 4],
                over,
                band,
            })
        })
        .collect();

    // walk each edge from one port through closure joins to the other port
    let mut seg_seen = vec![false; s_total];
    let mut ends: Vec<[Port; 2]> = Vec::new();
    for c in 0..c_total {
        for slot in SCAN_ORDER {
            if crossings[c].slots[slot] != usize::MAX {
                continue;
            }
            let start = Port::new(c, slot);
            let (mut s, mut entered) = port_seg[&start];
            let other = loop {
                seg_seen[s] = true;
                let exit = if entered == End::Top { End::Bottom } else { End::Top };
                match attach[s][end_index(exit)] {
                    Attach::Port(p) => break p,
                    Attach::Segment(next, end) => {
                        s = next;
                        entered = end;
                    }
                }
            };
            let id = ends.len();
            crossings[start.crossing].slots[start.slot] = id;
            crossings[other.crossing].slots[other.slot] = id;
            ends.push([start, other]);
        }
    }
    let mut free_loops = 0;
    for s0 in 0..s_total {
        if seg_seen[s0] {
            continue;
        }
        let (mut s, mut entered) = (s0, End::Top);
        while !seg_seen[s] {
            seg_seen[s] = true;
            let exit = if entered == End::Top { End::Bottom } else { End::Top };
            match attach[s][end_index(exit)] {
                Attach::Segment(next, end) => {
                    s = next;
                    entered = end;
                }
                Attach::Port(_) => unreachable!("crossing-free loop touches a crossing"),
            }
        }
        free_loops += 1;
    }

    // orient: the lowest unoriented edge of each component points into the
    // port where the scan first met it
    let mut edges: Vec<Option<Edge>> = vec![None; ends.len()];
    for start in 0..ends.len() {
        if edges[start].is_some() {
            continue;
        }
        let [first, other] = ends[start];
        edges[start] = Some(Edge { tail: other, head: first });
        let mut head = first;
        loop {
            let out = head.through();
            let e = crossings[out.crossing].slots[out.slot];
            if e == start {
                break;
            }
            let [p, q] = ends[e];
            let far = if p == out { q } else { p };
            edges[e] = Some(Edge { tail: out, head: far });
            head = far;
        }
    }

    let mut d = Diagram {
        crossings,
        edges: edges.into_iter().map(|e| e.expect("every edge oriented")).collect(),
        free_loops,
    };
    d.relabel();
    d
}
