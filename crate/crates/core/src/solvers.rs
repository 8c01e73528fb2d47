//! Greedy, noisy-greedy and exact solvers for the open-path problem.
//!
//! All solvers break ties toward the lowest collectible index, so their
//! output is a deterministic function of the instance (and, for the noisy
//! solver, of the random stream).

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{dist, path_length_unchecked, DistanceTable, Instance, Route, SolveResult};
use crate::noise::{sample_trunc_normal, RandomStream, TruncNormalParams};
use crate::scalar::Scalar;

/// Default size cap for [`exact_exhaustive`].
pub const EXHAUSTIVE_DEFAULT_LIMIT: usize = 10;
/// Size cap for [`exact_held_karp`]; the table holds `N * 2^N` entries.
pub const HELD_KARP_LIMIT: usize = 24;

/// Nearest-neighbour collection: repeatedly walk to the closest unvisited item.
pub fn greedy<T: Scalar>(instance: &Instance<T>) -> SolveResult<T> {
    let mut evaluated = 0u64;
    let route = nearest_first(instance, |_, d| {
        evaluated += 1;
        d
    });
    finish(instance, route, "greedy", evaluated)
}

/// Nearest-neighbour collection with misjudged distances.
///
/// At every step each unvisited candidate's true distance is multiplied by a
/// fresh draw ζ from the truncated normal; draws are taken in ascending
/// candidate index. The walker heads for the smallest perceived distance. The
/// reported length is the true length of the chosen route.
///
/// `sigma = 0` consumes no randomness and reproduces [`greedy`] exactly.
pub fn greedy_with_error<T: Scalar>(
    instance: &Instance<T>,
    sigma: f64,
    rng: &mut RandomStream,
) -> Result<SolveResult<T>> {
    let params = TruncNormalParams::new(sigma)?;
    let mut evaluated = 0u64;
    let route = nearest_first(instance, |_, d| {
        evaluated += 1;
        d * T::from_f64_lossy(sample_trunc_normal(&params, rng))
    });
    Ok(finish(instance, route, "greedy-error", evaluated))
}

/// Shared greedy loop; `perceive(candidate, true_distance)` is called for
/// every unvisited candidate in ascending index order at each step.
fn nearest_first<T: Scalar>(instance: &Instance<T>, mut perceive: impl FnMut(usize, T) -> T) -> Route {
    let c = instance.collectibles();
    let mut visited = vec![false; c.len()];
    let mut order = Vec::with_capacity(c.len());
    let mut at = instance.start();
    while order.len() < c.len() {
        let mut best: Option<(usize, T)> = None;
        for (i, &q) in c.iter().enumerate() {
            if visited[i] {
                continue;
            }
            let d = perceive(i, dist(at, q));
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((i, d));
            }
        }
        let (next, _) = best.expect("an unvisited collectible remains");
        visited[next] = true;
        order.push(next);
        at = c[next];
    }
    Route::new(order)
}

fn finish<T: Scalar>(instance: &Instance<T>, route: Route, name: &'static str, n_evaluated: u64) -> SolveResult<T> {
    let total_length = path_length_unchecked(instance, route.order());
    SolveResult { route, total_length, solver_name: name, n_evaluated }
}

/// Whether [`exact_exhaustive_with`] abandons partial routes that already
/// reach the incumbent length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pruning {
    Enabled,
    Disabled,
}

/// Optimal route by depth-first enumeration of all permutations with
/// branch-and-bound pruning.
///
/// Among equally short routes the lexicographically smallest is returned.
pub fn exact_exhaustive<T: Scalar>(instance: &Instance<T>, limit: usize) -> Result<SolveResult<T>> {
    exact_exhaustive_with(instance, limit, Pruning::Enabled)
}

pub fn exact_exhaustive_with<T: Scalar>(
    instance: &Instance<T>,
    limit: usize,
    pruning: Pruning,
) -> Result<SolveResult<T>> {
    let n = instance.len();
    if n > limit {
        return Err(Error::SizeExceeded { n, limit });
    }
    let mut search = Search {
        table: DistanceTable::new(instance),
        prune: pruning == Pruning::Enabled,
        used: vec![false; n],
        path: Vec::with_capacity(n),
        best: Vec::new(),
        best_len: T::infinity(),
        nodes: 0,
    };
    if n == 0 {
        search.best_len = T::zero();
    } else {
        search.extend(n, T::zero());
    }
    let route = Route::new(search.best);
    debug_assert_eq!(path_length_unchecked(instance, route.order()), search.best_len);
    Ok(SolveResult { route, total_length: search.best_len, solver_name: "exhaustive", n_evaluated: search.nodes })
}

struct Search<T> {
    table: DistanceTable<T>,
    prune: bool,
    used: Vec<bool>,
    path: Vec<usize>,
    best: Vec<usize>,
    best_len: T,
    nodes: u64,
}

impl<T: Scalar> Search<T> {
    fn extend(&mut self, n: usize, partial: T) {
        if self.path.len() == n {
            // Only strict improvements, so the first optimum found (in
            // lexicographic order) is kept.
            if partial < self.best_len {
                self.best_len = partial;
                self.best.clone_from(&self.path);
            }
            return;
        }
        for next in 0..n {
            if self.used[next] {
                continue;
            }
            let leg = match self.path.last() {
                Some(&at) => self.table.between(at, next),
                None => self.table.leg_from_start(next),
            };
            let len = partial + leg;
            self.nodes += 1;
            if self.prune && len >= self.best_len {
                continue;
            }
            self.used[next] = true;
            self.path.push(next);
            self.extend(n, len);
            self.path.pop();
            self.used[next] = false;
        }
    }
}

/// Optimal route by dynamic programming over subsets.
///
/// `best[S][j]` is the shortest open path from the start that visits exactly
/// the set `S` and ends at `j`. Legs are added in visit order, so the
/// reported optimum equals `path_length` of the returned route bit for bit.
pub fn exact_held_karp<T: Scalar>(instance: &Instance<T>) -> Result<SolveResult<T>> {
    let n = instance.len();
    if n > HELD_KARP_LIMIT {
        return Err(Error::SizeExceeded { n, limit: HELD_KARP_LIMIT });
    }
    if n == 0 {
        return Ok(SolveResult {
            route: Route::default(),
            total_length: T::zero(),
            solver_name: "held-karp",
            n_evaluated: 0,
        });
    }
    let table = DistanceTable::new(instance);
    let full = (1usize << n) - 1;
    let idx = |mask: usize, j: usize| mask * n + j;
    let mut best = vec![T::infinity(); (full + 1) * n];
    let mut parent = vec![u8::MAX; (full + 1) * n];
    let mut transitions = 0u64;

    for j in 0..n {
        best[idx(1 << j, j)] = T::zero() + table.leg_from_start(j);
    }
    for mask in 1..=full {
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let here = best[idx(mask, j)];
            if !here.is_finite() {
                continue;
            }
            for k in 0..n {
                if mask & (1 << k) != 0 {
                    continue;
                }
                transitions += 1;
                let cand = here + table.between(j, k);
                let slot = idx(mask | (1 << k), k);
                if cand < best[slot] {
                    best[slot] = cand;
                    parent[slot] = j as u8;
                }
            }
        }
    }

    let mut end = 0;
    for j in 1..n {
        if best[idx(full, j)] < best[idx(full, end)] {
            end = j;
        }
    }
    let total_length = best[idx(full, end)];

    let mut order = Vec::with_capacity(n);
    let (mut mask, mut j) = (full, end);
    loop {
        order.push(j);
        let p = parent[idx(mask, j)];
        mask &= !(1 << j);
        if mask == 0 {
            break;
        }
        j = p as usize;
    }
    order.reverse();
    Ok(SolveResult { route: Route::new(order), total_length, solver_name: "held-karp", n_evaluated: transitions })
}

/// Which exact solver an experiment uses as its baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExactSolver {
    #[default]
    HeldKarp,
    Exhaustive,
}

impl ExactSolver {
    pub fn limit(self) -> usize {
        match self {
            ExactSolver::HeldKarp => HELD_KARP_LIMIT,
            ExactSolver::Exhaustive => EXHAUSTIVE_DEFAULT_LIMIT,
        }
    }

    pub fn solve<T: Scalar>(self, instance: &Instance<T>) -> Result<SolveResult<T>> {
        match self {
            ExactSolver::HeldKarp => exact_held_karp(instance),
            ExactSolver::Exhaustive => exact_exhaustive(instance, EXHAUSTIVE_DEFAULT_LIMIT),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ExactSolver::HeldKarp => "held-karp",
            ExactSolver::Exhaustive => "exhaustive",
        }
    }
}

impl FromStr for ExactSolver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "held-karp" | "held_karp" => Ok(ExactSolver::HeldKarp),
            "exhaustive" => Ok(ExactSolver::Exhaustive),
            other => Err(Error::InvalidConfig(format!("unknown exact solver `{other}`"))),
        }
    }
}

/// Best exact solver for a one-off solve: enumeration while it is cheap
/// (canonical lexicographic tie-break), the subset DP beyond that.
pub fn exact<T: Scalar>(instance: &Instance<T>) -> Result<SolveResult<T>> {
    if instance.len() <= EXHAUSTIVE_DEFAULT_LIMIT {
        exact_exhaustive(instance, EXHAUSTIVE_DEFAULT_LIMIT)
    } else {
        exact_held_karp(instance)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{path_length, Point};
    use crate::noise::derive_stream;
    use proptest::prelude::*;

    fn line(start: f64, xs: &[f64]) -> Instance {
        Instance::new(Point::new(start, 0.0), xs.iter().map(|&x| Point::new(x, 0.0)).collect())
    }

    fn worked() -> Instance {
        line(0.0, &[1.0, 2.0, -1.5])
    }

    /// Plain enumeration of every permutation in lexicographic order, keeping
    /// the first strict minimum. Independent of the solvers above.
    fn brute_force(instance: &Instance) -> (Vec<usize>, f64) {
        fn rec(inst: &Instance, path: &mut Vec<usize>, best: &mut (Vec<usize>, f64)) {
            let n = inst.len();
            if path.len() == n {
                let len = path_length(inst, &Route::new(path.clone())).unwrap();
                if len < best.1 {
                    *best = (path.clone(), len);
                }
                return;
            }
            for i in 0..n {
                if !path.contains(&i) {
                    path.push(i);
                    rec(inst, path, best);
                    path.pop();
                }
            }
        }
        let mut best = (Vec::new(), f64::INFINITY);
        rec(instance, &mut Vec::new(), &mut best);
        if instance.is_empty() {
            best.1 = 0.0;
        }
        best
    }

    fn random_instance(n: usize, seed: u64) -> Instance {
        let mut rng = derive_stream(seed, 0);
        let mut pts = Vec::with_capacity(n);
        for _ in 0..n {
            pts.push(Point::new(rng.uniform01() * 1000.0, rng.uniform01() * 1000.0));
        }
        Instance::new(Point::new(500.0, 500.0), pts)
    }

    fn rel_close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
    }

    #[test]
    fn greedy_examples() {
        let r = greedy(&worked());
        assert_eq!(r.route.order(), &[0, 1, 2]);
        assert_eq!(r.total_length, 5.5);

        let r = greedy(&Instance::new(Point::new(0.0, 0.0), vec![Point::new(3.0, 4.0)]));
        assert_eq!((r.route.order(), r.total_length), (&[0][..], 5.0));

        // Equidistant candidates: lowest index wins.
        let r = greedy(&line(0.0, &[1.0, -1.0]));
        assert_eq!((r.route.order(), r.total_length), (&[0, 1][..], 3.0));
    }

    #[test]
    fn greedy_handles_degenerate_instances() {
        let r = greedy(&line(0.0, &[]));
        assert!(r.route.is_empty());
        assert_eq!(r.total_length, 0.0);
        let r = greedy(&line(0.0, &[2.0, 2.0, 2.0]));
        assert_eq!(r.route.order(), &[0, 1, 2]);
        assert_eq!(r.total_length, 2.0);
    }

    #[test]
    fn exhaustive_examples() {
        let r = exact_exhaustive(&worked(), EXHAUSTIVE_DEFAULT_LIMIT).unwrap();
        assert_eq!(brute_force(&worked()), (vec![2, 0, 1], 5.0));
        assert_eq!((r.route.order(), r.total_length), (&[2, 0, 1][..], 5.0));

        let r = exact_exhaustive(&line(0.0, &[]), EXHAUSTIVE_DEFAULT_LIMIT).unwrap();
        assert_eq!((r.route.order(), r.total_length), (&[][..], 0.0));

        let dup = Instance::new(Point::new(0.0, 0.0), vec![Point::new(3.0, 4.0), Point::new(3.0, 4.0)]);
        let r = exact_exhaustive(&dup, EXHAUSTIVE_DEFAULT_LIMIT).unwrap();
        assert_eq!((r.route.order(), r.total_length), (&[0, 1][..], 5.0));
    }

    #[test]
    fn exhaustive_enforces_limit() {
        let inst = random_instance(6, 1);
        assert_eq!(exact_exhaustive(&inst, 5), Err(Error::SizeExceeded { n: 6, limit: 5 }));
        assert!(exact_exhaustive(&inst, 6).is_ok());
    }

    #[test]
    fn held_karp_examples() {
        assert_eq!(exact_held_karp(&worked()).unwrap().total_length, 5.0);
        let one = Instance::new(Point::new(0.0, 0.0), vec![Point::new(3.0, 4.0)]);
        let r = exact_held_karp(&one).unwrap();
        assert_eq!((r.route.order(), r.total_length), (&[0][..], 5.0));
        assert_eq!(exact_held_karp(&line(0.0, &[])).unwrap().total_length, 0.0);
    }

    #[test]
    fn held_karp_enforces_limit() {
        let inst = random_instance(HELD_KARP_LIMIT + 1, 1);
        assert!(matches!(exact_held_karp(&inst), Err(Error::SizeExceeded { n: 25, limit: 24 })));
    }

    #[test]
    fn exact_solvers_match_brute_force() {
        for seed in 0..200u64 {
            let n = 2 + (seed % 6) as usize;
            let inst = random_instance(n, seed);
            let (order, len) = brute_force(&inst);
            let ex = exact_exhaustive(&inst, EXHAUSTIVE_DEFAULT_LIMIT).unwrap();
            assert_eq!(ex.route.order(), &order[..]);
            assert_eq!(ex.total_length, len);
            let hk = exact_held_karp(&inst).unwrap();
            assert!(rel_close(hk.total_length, len), "seed {seed}");
            assert_eq!(path_length(&inst, &hk.route).unwrap(), hk.total_length);
        }
    }

    #[test]
    fn pruning_never_changes_the_answer() {
        for seed in 0..100u64 {
            let inst = random_instance(1 + (seed % 8) as usize, seed + 1000);
            let a = exact_exhaustive_with(&inst, 8, Pruning::Enabled).unwrap();
            let b = exact_exhaustive_with(&inst, 8, Pruning::Disabled).unwrap();
            assert_eq!((a.route, a.total_length), (b.route, b.total_length));
            assert!(a.n_evaluated <= b.n_evaluated);
        }
    }

    #[test]
    fn noisy_greedy_single_candidate() {
        let one = Instance::new(Point::new(0.0, 0.0), vec![Point::new(3.0, 4.0)]);
        let r = greedy_with_error(&one, 0.4, &mut derive_stream(1, 0)).unwrap();
        assert_eq!((r.route.order(), r.total_length), (&[0][..], 5.0));
    }

    #[test]
    fn noisy_greedy_rejects_negative_sigma() {
        assert!(greedy_with_error(&worked(), -1.0, &mut derive_stream(1, 0)).is_err());
    }

    #[test]
    fn noisy_greedy_is_seed_deterministic() {
        let inst = random_instance(10, 4);
        let a = greedy_with_error(&inst, 0.3, &mut derive_stream(8, 1)).unwrap();
        let b = greedy_with_error(&inst, 0.3, &mut derive_stream(8, 1)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn f32_solvers_agree_with_f64_routes() {
        let inst = worked().cast::<f32>();
        assert_eq!(greedy(&inst).route.order(), &[0, 1, 2]);
        assert_eq!(exact_exhaustive(&inst, 10).unwrap().total_length, 5.0f32);
        assert_eq!(exact_held_karp(&inst).unwrap().total_length, 5.0f32);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn dominance_and_permutation(seed in any::<u64>(), n in 0usize..9) {
            let inst = random_instance(n, seed);
            let g = greedy(&inst);
            prop_assert!(g.route.validate(n).is_ok());
            let hk = exact_held_karp(&inst).unwrap();
            prop_assert!(hk.total_length <= g.total_length);
            let noisy = greedy_with_error(&inst, 0.4, &mut derive_stream(seed, 1)).unwrap();
            prop_assert!(noisy.route.validate(n).is_ok());
            prop_assert!(hk.total_length <= noisy.total_length);
        }

        #[test]
        fn zero_sigma_matches_greedy(seed in any::<u64>(), n in 0usize..12) {
            let inst = random_instance(n, seed);
            let noisy = greedy_with_error(&inst, 0.0, &mut derive_stream(seed, 9)).unwrap();
            let plain = greedy(&inst);
            prop_assert_eq!(noisy.route, plain.route);
            prop_assert_eq!(noisy.total_length.to_bits(), plain.total_length.to_bits());
        }

        #[test]
        fn argmin_is_scale_invariant(seed in any::<u64>(), n in 1usize..8, k in prop::sample::select(vec![0.1, 0.5, 2.0, 1000.0])) {
            let inst = random_instance(n, seed);
            let big = inst.scaled(k);
            let pairs = [
                (greedy(&inst), greedy(&big)),
                (greedy_with_error(&inst, 0.3, &mut derive_stream(seed, 2)).unwrap(),
                 greedy_with_error(&big, 0.3, &mut derive_stream(seed, 2)).unwrap()),
                (exact_exhaustive(&inst, 10).unwrap(), exact_exhaustive(&big, 10).unwrap()),
                (exact_held_karp(&inst).unwrap(), exact_held_karp(&big).unwrap()),
            ];
            for (a, b) in pairs {
                prop_assert_eq!(&a.route, &b.route);
                prop_assert!(rel_close(a.total_length * k, b.total_length));
            }
        }
    }
}
