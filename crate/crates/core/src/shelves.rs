//! p-shelves and p-racks: verification, enumeration, and the diagonal
//! solutions they induce.
//!
//! A p-shelf is a carrier `X` with one binary operation `▷_{z_ij}` per
//! ordered parameter pair, satisfying the parametric left
//! self-distributivity
//! `a ▷_{z_ik} (b ▷_{z_jk} c) = (a ▷_{z_ij} b) ▷_{z_jk} (a ▷_{z_ik} c)`.
//! A p-rack additionally has every left translation bijective.

use crate::carrier::{cx, is_bijection_slice, ParamFamily, ParamSubset};
use crate::error::{Budget, Counterexample, Error, Result, Verdict};
use crate::solutions::ParamYBMap;

/// A verified p-shelf. The family entry `(zi, zj, a)` is the left
/// translation `b ↦ a ▷_{z_ij} b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PShelf {
    pub op: ParamFamily,
}

impl PShelf {
    /// Verify and wrap; fails with the first self-distributivity violation.
    pub fn new(op: ParamFamily) -> Result<Self> {
        let v = check_p_shelf(&op);
        match v.counterexample {
            None => Ok(PShelf { op }),
            Some(c) => Err(Error::NotAShelf(Box::new(c))),
        }
    }

    /// Wrap without verification (enumeration interior, tests).
    pub fn new_unchecked(op: ParamFamily) -> Self {
        PShelf { op }
    }

    #[inline]
    pub fn apply(&self, zi: usize, zj: usize, a: usize, b: usize) -> usize {
        self.op.apply(zi, zj, a, b)
    }

    pub fn n(&self) -> usize {
        self.op.n
    }

    pub fn m(&self) -> usize {
        self.op.m()
    }

    /// The trivial shelf `a ▷ b = b` on `n` elements.
    pub fn trivial(n: usize, params: ParamSubset) -> Self {
        PShelf {
            op: ParamFamily::identity(n, params),
        }
    }

    pub fn is_rack(&self) -> bool {
        self.op.all_bijective()
    }
}

/// A verified p-rack: a p-shelf whose left translations are bijections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PRack {
    pub shelf: PShelf,
}

impl PRack {
    pub fn new(op: ParamFamily) -> Result<Self> {
        let v = check_p_rack(&op);
        match v.counterexample {
            None => Ok(PRack {
                shelf: PShelf { op },
            }),
            Some(c) => {
                if c.site == "left-translation-bijectivity" {
                    Err(Error::NotARack(Box::new(c)))
                } else {
                    Err(Error::NotAShelf(Box::new(c)))
                }
            }
        }
    }
}

/// Exhaustive p-self-distributivity check over all `|X|^3 |Y|^3`
/// instances. The first violation in lexicographic `(a, b, c, zi, zj, zk)`
/// order is reported.
pub fn check_p_shelf(op: &ParamFamily) -> Verdict {
    check_p_shelf_budgeted(op, &Budget::unlimited())
}

pub fn check_p_shelf_budgeted(op: &ParamFamily, budget: &Budget) -> Verdict {
    let (n, m) = (op.n, op.m());
    let mut checked = 0u64;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for zi in 0..m {
                    for zj in 0..m {
                        for zk in 0..m {
                            if budget.exhausted(checked) {
                                return Verdict::truncated(checked);
                            }
                            checked += 1;
                            let lhs = op.apply(zi, zk, a, op.apply(zj, zk, b, c));
                            let rhs =
                                op.apply(zj, zk, op.apply(zi, zj, a, b), op.apply(zi, zk, a, c));
                            if lhs != rhs {
                                return Verdict::fail(
                                    cx(
                                        "p-self-distributivity",
                                        &[zi, zj, zk],
                                        &[a, b, c],
                                        lhs,
                                        rhs,
                                    ),
                                    checked,
                                );
                            }
                        }
                    }
                }
            }
        }
    }
    Verdict::pass(checked)
}

/// p-shelf check plus bijectivity of every left translation.
pub fn check_p_rack(op: &ParamFamily) -> Verdict {
    check_p_rack_budgeted(op, &Budget::unlimited())
}

pub fn check_p_rack_budgeted(op: &ParamFamily, budget: &Budget) -> Verdict {
    let shelf = check_p_shelf_budgeted(op, budget);
    if !shelf.holds || !shelf.complete {
        return shelf;
    }
    let (n, m) = (op.n, op.m());
    let mut checked = shelf.checked;
    for zi in 0..m {
        for zj in 0..m {
            for a in 0..n {
                checked += 1;
                if !is_bijection_slice(op.map_slice(zi, zj, a)) {
                    return Verdict::fail(
                        Counterexample::new(
                            "left-translation-bijectivity",
                            vec![zi, zj],
                            vec![a],
                            "non-bijective left translation",
                            "permutation",
                        ),
                        checked,
                    );
                }
            }
        }
    }
    Verdict::pass(checked)
}

/// The diagonal solution induced by a shelf:
/// `R^{z_ij}(b, a) = (b, b ▷_{z_ij} a)`, i.e. `σ^{z_ij}_a = id` and
/// `τ^{z_ij}_b = L^{z_ij}_b`.
pub fn shelf_solution(shelf: &PShelf) -> ParamYBMap {
    let sigma = ParamFamily::identity(shelf.n(), shelf.op.params.clone());
    // τ^{z_ij}_b(a) = b ▷_{z_ij} a shares the shelf's table layout exactly.
    let tau = shelf.op.clone();
    ParamYBMap { sigma, tau }
}

/// Streaming exhaustive enumeration of p-shelf (or p-rack) families on an
/// `n`-element carrier with `m` parameter slots (`Y` = the first `m`
/// carrier indices). Depth-first table fill with incremental
/// self-distributivity pruning; with `iso` set, only the lexicographically
/// least representative of each relabeling class is emitted.
pub fn enumerate_p_shelves(
    n: usize,
    m: usize,
    rack_only: bool,
    iso: bool,
    budget: Budget,
) -> Result<ShelfEnumerator> {
    if n == 0 || m == 0 {
        return Err(Error::Invalid("carrier and Y must be non-empty".into()));
    }
    if m > n {
        return Err(Error::Invalid(format!("m = {m} exceeds n = {n}")));
    }
    let size = (n * n * m * m) as u64;
    if size > budget.size_limit {
        return Err(Error::SizeGuard {
            size,
            limit: budget.size_limit,
        });
    }
    let cells = n * n * m * m;
    Ok(ShelfEnumerator {
        n,
        m,
        rack_only,
        iso,
        budget,
        visited: 0,
        table: vec![usize::MAX; cells],
        stack: vec![0usize],
        done: false,
        budget_hit: false,
    })
}

/// Iterator over enumerated families; yields `Err(BudgetExceeded)` once if
/// the node budget runs out mid-search.
pub struct ShelfEnumerator {
    n: usize,
    m: usize,
    rack_only: bool,
    iso: bool,
    budget: Budget,
    visited: u64,
    table: Vec<usize>,
    /// stack[d] = next candidate value to try at cell depth d.
    stack: Vec<usize>,
    done: bool,
    budget_hit: bool,
}

impl ShelfEnumerator {
    #[inline]
    fn cell(&self, zi: usize, zj: usize, a: usize, b: usize) -> usize {
        ((zi * self.m + zj) * self.n + a) * self.n + b
    }

    #[inline]
    fn get(&self, zi: usize, zj: usize, a: usize, b: usize) -> usize {
        self.table[self.cell(zi, zj, a, b)]
    }

    /// Evaluate every distributivity instance on the current partial table;
    /// false iff some fully determined instance is violated.
    fn consistent(&self) -> bool {
        let (n, m) = (self.n, self.m);
        const UNSET: usize = usize::MAX;
        for zi in 0..m {
            for zj in 0..m {
                for zk in 0..m {
                    for a in 0..n {
                        for b in 0..n {
                            for c in 0..n {
                                let bc = self.get(zj, zk, b, c);
                                if bc == UNSET {
                                    continue;
                                }
                                let lhs = self.get(zi, zk, a, bc);
                                if lhs == UNSET {
                                    continue;
                                }
                                let ab = self.get(zi, zj, a, b);
                                if ab == UNSET {
                                    continue;
                                }
                                let ac = self.get(zi, zk, a, c);
                                if ac == UNSET {
                                    continue;
                                }
                                let rhs = self.get(zj, zk, ab, ac);
                                if rhs == UNSET {
                                    continue;
                                }
                                if lhs != rhs {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }

    /// Row-injectivity prune for rack-only search: the cell at depth `d`
    /// must not duplicate an earlier value in its row.
    fn row_ok(&self, d: usize, v: usize) -> bool {
        if !self.rack_only {
            return true;
        }
        let b = d % self.n;
        let row_start = d - b;
        self.table[row_start..d].iter().all(|&w| w != v)
    }

    fn emit_current(&self) -> ParamFamily {
        let params = ParamSubset {
            indices: (0..self.m).collect(),
        };
        let table = self.table.clone();
        let (n, m) = (self.n, self.m);
        ParamFamily::from_fn(n, params, |zi, zj, a, b| {
            table[((zi * m + zj) * n + a) * n + b]
        })
    }

    fn is_canonical(&self, fam: &ParamFamily) -> bool {
        canonical_form(fam) == *fam.flat()
    }
}

impl Iterator for ShelfEnumerator {
    type Item = Result<ParamFamily>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let cells = self.table.len();
        loop {
            if self.budget.exhausted(self.visited) {
                self.done = true;
                self.budget_hit = true;
                return Some(Err(Error::BudgetExceeded {
                    visited: self.visited,
                    limit: self.budget.limit.unwrap_or(0),
                }));
            }
            let depth = self.stack.len() - 1;
            let candidate = self.stack[depth];
            if candidate >= self.n {
                // exhausted this cell: backtrack
                self.stack.pop();
                if self.stack.is_empty() {
                    self.done = true;
                    return None;
                }
                self.table[self.stack.len() - 1] = usize::MAX;
                let d = self.stack.len() - 1;
                self.stack[d] += 1;
                continue;
            }
            self.visited += 1;
            self.table[depth] = candidate;
            if self.row_ok(depth, candidate) && self.consistent() {
                if depth + 1 == cells {
                    // complete table satisfying all constraints
                    let fam = self.emit_current();
                    self.table[depth] = usize::MAX;
                    self.stack[depth] += 1;
                    if !self.iso || self.is_canonical(&fam) {
                        return Some(Ok(fam));
                    }
                    continue;
                }
                self.stack.push(0);
            } else {
                self.table[depth] = usize::MAX;
                self.stack[depth] += 1;
            }
        }
    }
}

/// Lexicographically least flat table over the relabeling group:
/// simultaneous permutations of the carrier that fix `Y` (the first `m`
/// indices) setwise.
pub fn canonical_form(fam: &ParamFamily) -> Vec<usize> {
    let (n, m) = (fam.n, fam.m());
    let mut best: Option<Vec<usize>> = None;
    let mut pi: Vec<usize> = (0..n).collect();
    visit_y_fixing_perms(&mut pi, m, 0, &mut |pi| {
        let relabeled = relabel(fam, pi);
        match &mut best {
            None => best = Some(relabeled),
            Some(b) => {
                if relabeled < *b {
                    *b = relabeled;
                }
            }
        }
    });
    best.unwrap()
}

fn relabel(fam: &ParamFamily, pi: &[usize]) -> Vec<usize> {
    let (n, m) = (fam.n, fam.m());
    let mut out = vec![0usize; n * n * m * m];
    for zi in 0..m {
        for zj in 0..m {
            for a in 0..n {
                for b in 0..n {
                    let (ri, rj) = (pi[zi], pi[zj]);
                    out[((ri * m + rj) * n + pi[a]) * n + pi[b]] = pi[fam.apply(zi, zj, a, b)];
                }
            }
        }
    }
    out
}

/// Visit all permutations of `0..n` that map `{0..m-1}` onto itself.
fn visit_y_fixing_perms(pi: &mut Vec<usize>, m: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    let n = pi.len();
    if k == n {
        f(pi);
        return;
    }
    // positions 0..m permute within Y, positions m..n within the rest
    let (lo, hi) = if k < m { (k, m) } else { (k, n) };
    for i in lo..hi {
        pi.swap(k, i);
        visit_y_fixing_perms(pi, m, k + 1, f);
        pi.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solutions::check_ybe;

    fn trivial(n: usize, m: usize) -> ParamFamily {
        ParamFamily::identity(
            n,
            ParamSubset {
                indices: (0..m).collect(),
            },
        )
    }

    #[test]
    fn trivial_family_is_shelf_and_rack() {
        let fam = trivial(3, 2);
        assert!(check_p_shelf(&fam).holds);
        assert!(check_p_rack(&fam).holds);
    }

    #[test]
    fn left_projection_is_a_degenerate_shelf() {
        // a ▷ b = a: both sides of the distributivity law collapse to a
        let ps = ParamSubset { indices: vec![0] };
        let fam = ParamFamily::from_fn(2, ps, |_, _, a, _| a);
        assert!(check_p_shelf(&fam).holds);
        assert!(!check_p_rack(&fam).holds, "constant rows are not bijective");
    }

    #[test]
    fn xor_op_is_not_a_shelf() {
        // a ▷ b = a + b mod 2 violates distributivity at a = 1
        let ps = ParamSubset { indices: vec![0] };
        let fam = ParamFamily::from_fn(2, ps, |_, _, a, b| (a + b) % 2);
        let v = check_p_shelf(&fam);
        assert!(!v.holds);
        let c = v.counterexample.unwrap();
        // first violating (a,b,c,zi,zj,zk) in lexicographic order
        assert_eq!(c.elems, vec![1, 0, 0]);
        assert_eq!(c.zs, vec![0, 0, 0]);
    }

    #[test]
    fn two_element_swap_rack() {
        // a ▷ b = the other element, independent of a
        let ps = ParamSubset { indices: vec![0] };
        let fam = ParamFamily::from_fn(2, ps, |_, _, _, b| 1 - b);
        assert!(check_p_rack(&fam).holds);
        let shelf = PShelf::new(fam).unwrap();
        let sol = shelf_solution(&shelf);
        assert!(check_ybe(&sol, crate::solutions::YbeMethod::Direct).holds);
        assert!(check_ybe(&sol, crate::solutions::YbeMethod::Components).holds);
    }

    #[test]
    fn perturbed_shelf_detected_by_rack_check() {
        let mut fam = trivial(3, 1);
        fam.set(0, 0, 1, 0, 1); // row (0,0,1) now maps 0,1 -> 1,1
        let v = check_p_rack(&fam);
        assert!(!v.holds);
    }

    #[test]
    fn trivial_shelf_solution_is_identity_map() {
        let shelf = PShelf::trivial(
            3,
            ParamSubset {
                indices: vec![0, 1],
            },
        );
        let sol = shelf_solution(&shelf);
        for zi in 0..2 {
            for zj in 0..2 {
                for b in 0..3 {
                    for a in 0..3 {
                        assert_eq!(sol.apply(zi, zj, b, a), (b, a));
                    }
                }
            }
        }
    }

    /// Independent brute-force count of p-shelf tables: try all n^(n^2 m^2)
    /// raw tables (only callable for tiny sizes).
    fn brute_force_count(n: usize, m: usize, rack_only: bool) -> u64 {
        let cells = n * n * m * m;
        let total = (n as u64).pow(cells as u32);
        let mut count = 0u64;
        for code in 0..total {
            let mut t = Vec::with_capacity(cells);
            let mut c = code;
            for _ in 0..cells {
                t.push((c % n as u64) as usize);
                c /= n as u64;
            }
            let ps = ParamSubset {
                indices: (0..m).collect(),
            };
            let fam =
                ParamFamily::from_fn(n, ps, |zi, zj, a, b| t[((zi * m + zj) * n + a) * n + b]);
            let ok = if rack_only {
                check_p_rack(&fam).holds
            } else {
                check_p_shelf(&fam).holds
            };
            if ok {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn singleton_enumeration() {
        let found: Vec<_> = enumerate_p_shelves(1, 1, false, false, Budget::unlimited())
            .unwrap()
            .collect::<Result<Vec<_>>>()
            .unwrap();
        assert_eq!(found.len(), 1);
    }

    #[test]
    fn two_element_rack_count_matches_brute_force() {
        let found: Vec<_> = enumerate_p_shelves(2, 1, true, false, Budget::unlimited())
            .unwrap()
            .collect::<Result<Vec<_>>>()
            .unwrap();
        assert_eq!(found.len() as u64, brute_force_count(2, 1, true));
    }

    #[test]
    fn two_element_shelf_count_matches_brute_force() {
        let found: Vec<_> = enumerate_p_shelves(2, 1, false, false, Budget::unlimited())
            .unwrap()
            .collect::<Result<Vec<_>>>()
            .unwrap();
        assert_eq!(found.len() as u64, brute_force_count(2, 1, false));
    }

    #[test]
    fn n2_m2_enumeration_all_pass_shelf_check() {
        let found: Vec<_> = enumerate_p_shelves(2, 2, false, false, Budget::unlimited())
            .unwrap()
            .collect::<Result<Vec<_>>>()
            .unwrap();
        assert_eq!(found.len() as u64, brute_force_count(2, 2, false));
        for fam in &found {
            assert!(check_p_shelf(fam).holds);
        }
    }

    #[test]
    fn iso_reduction_emits_canonical_representatives_only() {
        let all: Vec<_> = enumerate_p_shelves(3, 1, false, true, Budget::unlimited())
            .unwrap()
            .collect::<Result<Vec<_>>>()
            .unwrap();
        for fam in &all {
            assert_eq!(canonical_form(fam), *fam.flat());
        }
        // canonical reps are strictly fewer than raw tables for n = 3
        let raw: Vec<_> = enumerate_p_shelves(3, 1, false, false, Budget::unlimited())
            .unwrap()
            .collect::<Result<Vec<_>>>()
            .unwrap();
        assert!(all.len() < raw.len());
        // every raw table's canonical form appears among the reps
        for fam in &raw {
            let cf = canonical_form(fam);
            assert!(all.iter().any(|g| *g.flat() == cf));
        }
    }

    #[test]
    fn rack_solution_inverts_by_undoing_the_translation() {
        // for rack inputs, R(a, b) = (a, a ▷ b) is inverted by
        // (a, a ▷ b) ↦ (a, b)
        let br = crate::braces::cyclic_brace(3).unwrap();
        let y = ParamSubset::full(br.n());
        let xi = br.carrier.index_of(3).unwrap();
        let shelf = crate::braces::brace_shelf(&br, &y, xi).unwrap();
        let inv = crate::braces::brace_shelf_inverse(&br, &y, xi).unwrap();
        let sol = shelf_solution(&shelf);
        let n = br.n();
        for zi in 0..n {
            for zj in 0..n {
                for b in 0..n {
                    for a in 0..n {
                        let (x, y1) = sol.apply(zi, zj, b, a);
                        assert_eq!(x, b);
                        assert_eq!(inv.apply(zi, zj, x, y1), a);
                    }
                }
            }
        }
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let mut it = enumerate_p_shelves(2, 2, false, false, Budget::limited(10)).unwrap();
        let mut saw_budget_error = false;
        for item in &mut it {
            if let Err(Error::BudgetExceeded { .. }) = item {
                saw_budget_error = true;
                break;
            }
        }
        assert!(saw_budget_error);
    }

    #[test]
    fn size_guard_rejects_oversized_search() {
        let err = enumerate_p_shelves(64, 64, false, false, Budget::unlimited());
        assert!(matches!(err, Err(Error::SizeGuard { .. })));
    }
}
