//! The tilted lattice, its edges, the four game moves and the Bernoulli
//! edge environment.
//!
//! Vertices are the integer points with an even coordinate sum. Every
//! vertex has four neighbours at distance `sqrt(2)`; an edge is identified
//! by its lower endpoint and the horizontal direction of its upper one.
//!
//! The environment is never stored. [`Configuration`] derives the state of
//! an edge from a stateless hash of `(seed, edge)`, so the field is
//! infinite, random access, and identical on every platform.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("({0}, {1}) is not a lattice vertex: coordinate sum must be even")]
    NotAVertex(i64, i64),
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("edge direction must be -1 or +1, got {0}")]
    InvalidDirection(i64),
}

/// True iff `(x, y)` belongs to the lattice.
#[inline]
pub fn is_vertex(x: i64, y: i64) -> bool {
    (x + y).rem_euclid(2) == 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub x: i64,
    pub y: i64,
}

impl Vertex {
    pub fn new(x: i64, y: i64) -> Result<Self, LatticeError> {
        if is_vertex(x, y) {
            Ok(Vertex { x, y })
        } else {
            Err(LatticeError::NotAVertex(x, y))
        }
    }

    pub const ORIGIN: Vertex = Vertex { x: 0, y: 0 };

    /// Both coordinates moved by the same lattice vector. The offset must
    /// itself have an even coordinate sum.
    pub fn translate(self, dx: i64, dy: i64) -> Result<Self, LatticeError> {
        Vertex::new(self.x + dx, self.y + dy)
    }

    /// The neighbour reached by `action`, without the edge.
    #[inline]
    pub fn neighbor(self, action: ActionPair) -> Vertex {
        Vertex {
            x: self.x + action.lateral.dx(),
            y: self.y + action.vertical.dy(),
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Player 1's action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Vertical {
    Top,
    Bottom,
}

impl Vertical {
    #[inline]
    pub fn dy(self) -> i64 {
        match self {
            Vertical::Top => 1,
            Vertical::Bottom => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Vertical::Top => 'T',
            Vertical::Bottom => 'B',
        }
    }
}

/// Player 2's action.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lateral {
    Left,
    Right,
}

impl Lateral {
    #[inline]
    pub fn dx(self) -> i64 {
        match self {
            Lateral::Left => -1,
            Lateral::Right => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Lateral::Left => 'L',
            Lateral::Right => 'R',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ActionPair {
    pub vertical: Vertical,
    pub lateral: Lateral,
}

impl ActionPair {
    pub const fn new(vertical: Vertical, lateral: Lateral) -> Self {
        ActionPair { vertical, lateral }
    }

    pub const ALL: [ActionPair; 4] = [
        ActionPair::new(Vertical::Top, Lateral::Left),
        ActionPair::new(Vertical::Top, Lateral::Right),
        ActionPair::new(Vertical::Bottom, Lateral::Left),
        ActionPair::new(Vertical::Bottom, Lateral::Right),
    ];
}

/// Canonical id of an undirected edge: the lower endpoint plus the sign of
/// the horizontal displacement towards the upper endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId {
    lower: Vertex,
    dx: i8,
}

impl EdgeId {
    pub fn new(lower: Vertex, dx: i64) -> Result<Self, LatticeError> {
        match dx {
            -1 | 1 => Ok(EdgeId {
                lower,
                dx: dx as i8,
            }),
            other => Err(LatticeError::InvalidDirection(other)),
        }
    }

    /// The edge joining two lattice neighbours, `None` if they are not
    /// adjacent.
    pub fn between(a: Vertex, b: Vertex) -> Option<Self> {
        let (lo, hi) = if a.y < b.y { (a, b) } else { (b, a) };
        let dx = hi.x - lo.x;
        if hi.y - lo.y == 1 && dx.abs() == 1 {
            Some(EdgeId { lower: lo, dx: dx as i8 })
        } else {
            None
        }
    }

    /// The edge leaving `lower` upwards in direction `dx`, for callers that
    /// already know `dx` is a unit step.
    #[inline]
    pub(crate) fn up_from(lower: Vertex, dx: i64) -> Self {
        debug_assert!(dx == 1 || dx == -1);
        EdgeId { lower, dx: dx as i8 }
    }

    #[inline]
    pub fn lower(self) -> Vertex {
        self.lower
    }

    #[inline]
    pub fn dx(self) -> i64 {
        self.dx as i64
    }

    #[inline]
    pub fn upper(self) -> Vertex {
        Vertex {
            x: self.lower.x + self.dx as i64,
            y: self.lower.y + 1,
        }
    }

    pub fn endpoints(self) -> [Vertex; 2] {
        [self.lower, self.upper()]
    }
}

/// Moves the token from `z` by `action` and returns the crossed edge with
/// the destination.
#[inline]
pub fn step(z: Vertex, action: ActionPair) -> (EdgeId, Vertex) {
    let dest = z.neighbor(action);
    let edge = match action.vertical {
        Vertical::Top => EdgeId::up_from(z, action.lateral.dx()),
        // going down, the destination is the lower endpoint and the upper
        // one (z) sits on the opposite side
        Vertical::Bottom => EdgeId::up_from(dest, -action.lateral.dx()),
    };
    (edge, dest)
}

/// Read access to an edge environment. Open edges cost 1.
pub trait EdgeField: Sync {
    fn is_open(&self, e: EdgeId) -> bool;

    #[inline]
    fn cost(&self, e: EdgeId) -> u8 {
        self.is_open(e) as u8
    }
}

impl<F: EdgeField + ?Sized> EdgeField for &F {
    #[inline]
    fn is_open(&self, e: EdgeId) -> bool {
        (**self).is_open(e)
    }
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output function applied to `z + gamma`.
#[inline]
pub fn splitmix64(z: u64) -> u64 {
    let mut z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th independent substream of `master`.
pub fn substream_seed(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ splitmix64(index ^ 0xD1B5_4A32_D192_ED03))
}

#[inline]
fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

const UNIT_SCALE: f64 = 9_007_199_254_740_992.0; // 2^53

/// An i.i.d. Bernoulli(p) field over all edges, realized lazily.
///
/// An edge is open iff its 53-bit hash uniform is below `p`, so for a fixed
/// seed raising `p` only ever opens edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Configuration {
    seed: u64,
    p: f64,
    threshold: u64,
    offset: (i64, i64),
}

impl Configuration {
    pub fn new(seed: u64, p: f64) -> Result<Self, LatticeError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(LatticeError::InvalidProbability(p));
        }
        // p * 2^53 is exact; ceil keeps P(u < p) = threshold / 2^53
        let threshold = (p * UNIT_SCALE).ceil() as u64;
        Ok(Configuration {
            seed,
            p,
            threshold,
            offset: (0, 0),
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Same seed at another density; the two fields are monotonically
    /// coupled.
    pub fn with_p(&self, p: f64) -> Result<Self, LatticeError> {
        let mut c = Configuration::new(self.seed, p)?;
        c.offset = self.offset;
        Ok(c)
    }

    /// The field seen from a frame moved by `(dx, dy)`: edge `e` of the
    /// result has the state of `e + (dx, dy)` in `self`.
    pub fn translated(&self, dx: i64, dy: i64) -> Result<Self, LatticeError> {
        if !is_vertex(dx, dy) {
            return Err(LatticeError::NotAVertex(dx, dy));
        }
        let mut c = *self;
        c.offset = (self.offset.0 + dx, self.offset.1 + dy);
        Ok(c)
    }

    #[inline]
    fn raw_bits(&self, e: EdgeId) -> u64 {
        let x = e.lower.x + self.offset.0;
        let y = e.lower.y + self.offset.1;
        let dir = (e.dx > 0) as u64;
        let h = splitmix64(self.seed ^ splitmix64(zigzag(x)));
        splitmix64(h ^ ((zigzag(y) << 1) | dir)) >> 11
    }

    /// The per-edge uniform in `[0, 1)` that the threshold is compared to.
    pub fn uniform(&self, e: EdgeId) -> f64 {
        self.raw_bits(e) as f64 / UNIT_SCALE
    }

    #[inline]
    pub fn edge_cost(&self, e: EdgeId) -> u8 {
        (self.raw_bits(e) < self.threshold) as u8
    }
}

impl EdgeField for Configuration {
    #[inline]
    fn is_open(&self, e: EdgeId) -> bool {
        self.raw_bits(e) < self.threshold
    }
}

/// An explicitly listed set of open edges; everything else is closed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExplicitField {
    open: HashSet<EdgeId>,
}

impl ExplicitField {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn open(&mut self, e: EdgeId) -> &mut Self {
        self.open.insert(e);
        self
    }

    pub fn close(&mut self, e: EdgeId) -> &mut Self {
        self.open.remove(&e);
        self
    }

    pub fn len(&self) -> usize {
        self.open.len()
    }

    pub fn is_empty(&self) -> bool {
        self.open.is_empty()
    }
}

impl FromIterator<EdgeId> for ExplicitField {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        ExplicitField {
            open: iter.into_iter().collect(),
        }
    }
}

impl EdgeField for ExplicitField {
    fn is_open(&self, e: EdgeId) -> bool {
        self.open.contains(&e)
    }
}

/// Every edge open (`true`) or every edge closed (`false`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstantField(pub bool);

impl EdgeField for ConstantField {
    fn is_open(&self, _: EdgeId) -> bool {
        self.0
    }
}
