//! Points, instances, routes and open-path length.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A location on the map, in map units. Both coordinates are finite.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point<T = f64> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    /// Panics on a non-finite coordinate; use [`Point::try_new`] for untrusted input.
    pub fn new(x: T, y: T) -> Self {
        Self::try_new(x, y).expect("point coordinates must be finite")
    }

    pub fn try_new(x: T, y: T) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::NonFinite(format!("({x}, {y})")))
        }
    }

    pub fn scaled(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    pub fn translated(self, dx: T, dy: T) -> Self {
        Self::new(self.x + dx, self.y + dy)
    }

    pub fn cast<U: Scalar>(self) -> Point<U> {
        Point::new(U::from_f64_lossy(self.x.to_f64_lossy()), U::from_f64_lossy(self.y.to_f64_lossy()))
    }
}

/// Euclidean distance.
#[inline]
pub fn dist<T: Scalar>(a: Point<T>, b: Point<T>) -> T {
    (a.x - b.x).hypot(a.y - b.y)
}

/// A start position and the collectibles to gather. Routes refer to
/// collectibles by their index in this list.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance<T = f64> {
    start: Point<T>,
    collectibles: Vec<Point<T>>,
}

impl<T: Scalar> Instance<T> {
    pub fn new(start: Point<T>, collectibles: Vec<Point<T>>) -> Self {
        Self { start, collectibles }
    }

    /// Builds an instance from raw `(x, y)` pairs, rejecting non-finite values.
    pub fn from_coords(start: (T, T), collectibles: &[(T, T)]) -> Result<Self> {
        let start = Point::try_new(start.0, start.1)?;
        let collectibles = collectibles.iter().map(|&(x, y)| Point::try_new(x, y)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(start, collectibles))
    }

    pub fn start(&self) -> Point<T> {
        self.start
    }

    pub fn collectibles(&self) -> &[Point<T>] {
        &self.collectibles
    }

    pub fn len(&self) -> usize {
        self.collectibles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.collectibles.is_empty()
    }

    /// Same instance seen from a different start position.
    pub fn with_start(&self, start: Point<T>) -> Self {
        Self::new(start, self.collectibles.clone())
    }

    /// Applies `f` to the start and to every collectible.
    pub fn map_points(&self, f: impl Fn(Point<T>) -> Point<T>) -> Self {
        Self::new(f(self.start), self.collectibles.iter().copied().map(f).collect())
    }

    pub fn scaled(&self, k: T) -> Self {
        self.map_points(|p| p.scaled(k))
    }

    pub fn cast<U: Scalar>(&self) -> Instance<U> {
        Instance::new(self.start.cast(), self.collectibles.iter().map(|p| p.cast()).collect())
    }
}

/// Visit order over collectible indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Route {
    order: Vec<usize>,
}

impl Route {
    pub fn new(order: Vec<usize>) -> Self {
        Self { order }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn reversed(&self) -> Self {
        Self::new(self.order.iter().rev().copied().collect())
    }

    /// Checks that the order is a permutation of `0..n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.order.len() != n {
            return Err(Error::InvalidPermutation {
                n,
                reason: format!("expected {n} indices, got {}", self.order.len()),
            });
        }
        let mut seen = vec![false; n];
        for &i in &self.order {
            if i >= n {
                return Err(Error::InvalidPermutation { n, reason: format!("index {i} out of range") });
            }
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidPermutation { n, reason: format!("index {i} repeated") });
            }
        }
        Ok(())
    }
}

impl From<Vec<usize>> for Route {
    fn from(order: Vec<usize>) -> Self {
        Self::new(order)
    }
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, i) in self.order.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// Length of the open path start -> c[order[0]] -> ... -> c[order[N-1]].
///
/// Legs are accumulated left to right; the exact solvers accumulate in the
/// same order so their reported optimum is bit-identical to this value.
pub fn path_length<T: Scalar>(instance: &Instance<T>, route: &Route) -> Result<T> {
    route.validate(instance.len())?;
    Ok(path_length_unchecked(instance, route.order()))
}

pub(crate) fn path_length_unchecked<T: Scalar>(instance: &Instance<T>, order: &[usize]) -> T {
    let c = instance.collectibles();
    let mut at = instance.start();
    let mut total = T::zero();
    for &i in order {
        total = total + dist(at, c[i]);
        at = c[i];
    }
    total
}

/// Row-major pairwise distances, with the start stored at index `n`.
pub(crate) struct DistanceTable<T> {
    n: usize,
    d: Vec<T>,
}

impl<T: Scalar> DistanceTable<T> {
    pub(crate) fn new(instance: &Instance<T>) -> Self {
        let n = instance.len();
        let pts: Vec<Point<T>> =
            instance.collectibles().iter().copied().chain(std::iter::once(instance.start())).collect();
        let mut d = Vec::with_capacity((n + 1) * (n + 1));
        for &a in &pts {
            for &b in &pts {
                d.push(dist(a, b));
            }
        }
        Self { n, d }
    }

    #[inline]
    pub(crate) fn between(&self, i: usize, j: usize) -> T {
        self.d[i * (self.n + 1) + j]
    }

    #[inline]
    pub(crate) fn leg_from_start(&self, j: usize) -> T {
        self.between(self.n, j)
    }
}

/// A solver's answer: the route, its true open-path length, and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult<T = f64> {
    pub route: Route,
    pub total_length: T,
    pub solver_name: &'static str,
    /// Complete routes or search/DP states examined.
    pub n_evaluated: u64,
}
