//! The group of invertible tree series under operadic substitution.
//!
//! `compose(x, y)` substitutes `y` for every vertex of every tree of `x`,
//! reattaching each edge to an arbitrary vertex of the parent's replacement.
//! Since the result of substituting into a tree `B(t_1, ..., t_k)` is `y`
//! with the substituted children grafted anywhere onto it, the product is
//! computed recursively on subtrees with memoization. [`compose_enumerated`]
//! walks the individual labeled assignments instead and serves as the
//! reference implementation.

use std::collections::HashMap;
use std::rc::Rc;

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{pow, Rational};
use crate::series::{exp_star, same_order, TreeSeries};
use crate::trees::{self, RawTree, TreeId, TreeTable};

type Forest = Vec<TreeId>;

/// Memoized images of basis trees under `v ↦ y`.
struct Substitution<'a> {
    tab: &'static TreeTable,
    y: &'a TreeSeries,
    order: usize,
    by_tree: HashMap<TreeId, Rc<TreeSeries>>,
    by_forest: HashMap<Forest, Rc<TreeSeries>>,
}

impl<'a> Substitution<'a> {
    fn new(y: &'a TreeSeries) -> Self {
        Substitution {
            tab: trees::table(),
            y,
            order: y.order(),
            by_tree: HashMap::new(),
            by_forest: HashMap::new(),
        }
    }

    fn image(&mut self, t: TreeId) -> Result<Rc<TreeSeries>> {
        if let Some(hit) = self.by_tree.get(&t) {
            return Ok(hit.clone());
        }
        let children = self.tab.tree(t).children().to_vec();
        let result = if children.is_empty() {
            self.y.clone()
        } else {
            let room = self.order - 1;
            let mut product: HashMap<Forest, (usize, Rational)> = HashMap::new();
            product.insert(Vec::new(), (0, Rational::one()));
            for c in children {
                let img = self.image(c)?;
                let mut next: HashMap<Forest, (usize, Rational)> = HashMap::new();
                for (forest, (size, a)) in &product {
                    for (s, b) in img.terms() {
                        let total = size + self.tab.nodes(s);
                        if total > room {
                            break;
                        }
                        let mut f = forest.clone();
                        let at = f.partition_point(|&u| u <= s);
                        f.insert(at, s);
                        let slot = next.entry(f).or_insert_with(|| (total, Rational::zero()));
                        slot.1 += a * b;
                    }
                }
                product = next;
            }
            let mut dense = vec![Rational::zero(); self.tab.ids_up_to(self.order).count()];
            for (forest, (size, a)) in product {
                if a.is_zero() {
                    continue;
                }
                let lifted = self.lift(forest, size)?;
                for (w, c) in lifted.terms() {
                    dense[w.index()] += &a * c;
                }
            }
            TreeSeries::from_terms(
                self.order,
                dense
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (TreeId::from_index(i), c)),
            )?
        };
        let result = Rc::new(result);
        self.by_tree.insert(t, result.clone());
        Ok(result)
    }

    /// `Σ_s y_s · s{forest}`: attach the forest anywhere onto each tree of `y`.
    fn lift(&mut self, forest: Forest, size: usize) -> Result<Rc<TreeSeries>> {
        if let Some(hit) = self.by_forest.get(&forest) {
            return Ok(hit.clone());
        }
        let room = self.order - size;
        let mut out = TreeSeries::zero(self.order)?;
        for (s, ys) in self.y.terms() {
            if self.tab.nodes(s) > room {
                break;
            }
            for &(w, k) in self.tab.multi_graft(s, &forest).iter() {
                out.add_term(w, ys * Rational::from_integer(BigInt::from(k)));
            }
        }
        let out = Rc::new(out);
        self.by_forest.insert(forest, out.clone());
        Ok(out)
    }
}

/// The group product `x × y`. Linear in `x`, not in `y`.
pub fn compose(x: &TreeSeries, y: &TreeSeries) -> Result<TreeSeries> {
    let order = same_order(x, y)?;
    let mut sub = Substitution::new(y);
    let mut out = TreeSeries::zero(order)?;
    for (t, c) in x.terms() {
        let img = sub.image(t)?;
        out.add_scaled(&img, c);
    }
    Ok(out)
}

/// Reference product: for every tree of `x`, enumerate each assignment of
/// trees of `y` to its vertices and each choice of attachment vertex for
/// its edges, then canonicalize the assembled labeled tree.
pub fn compose_enumerated(x: &TreeSeries, y: &TreeSeries) -> Result<TreeSeries> {
    let order = same_order(x, y)?;
    let tab = trees::table();
    let ys: Vec<(TreeId, Rational)> = y.terms().map(|(t, c)| (t, c.clone())).collect();
    let mut out = TreeSeries::zero(order)?;

    struct Walk<'w> {
        tab: &'w TreeTable,
        ys: &'w [(TreeId, Rational)],
        parents: Vec<Option<usize>>,
        order: usize,
    }

    impl Walk<'_> {
        fn assign(
            &self,
            vertex: usize,
            used: usize,
            chosen: &mut Vec<TreeId>,
            weight: Rational,
            out: &mut TreeSeries,
        ) -> Result<()> {
            if vertex == self.parents.len() {
                return self.attach(chosen, &weight, out);
            }
            let still_needed = self.parents.len() - vertex - 1;
            for (s, d) in self.ys {
                let size = self.tab.nodes(*s);
                if used + size + still_needed > self.order {
                    continue;
                }
                chosen.push(*s);
                self.assign(vertex + 1, used + size, chosen, &weight * d, out)?;
                chosen.pop();
            }
            Ok(())
        }

        fn attach(&self, chosen: &[TreeId], weight: &Rational, out: &mut TreeSeries) -> Result<()> {
            let blocks: Vec<Vec<Option<usize>>> = chosen
                .iter()
                .map(|&s| self.tab.preorder_parents(s))
                .collect();
            let mut offsets = Vec::with_capacity(blocks.len());
            let mut total = 0;
            for b in &blocks {
                offsets.push(total);
                total += b.len();
            }
            let m = chosen.len();
            let mut targets = vec![0usize; m];
            loop {
                let mut parents = Vec::with_capacity(total);
                for (i, block) in blocks.iter().enumerate() {
                    for (j, p) in block.iter().enumerate() {
                        parents.push(match (j, p, self.parents[i]) {
                            (0, _, None) => None,
                            (0, _, Some(q)) => Some(offsets[q] + targets[i]),
                            (_, Some(p), _) => Some(offsets[i] + p),
                            (_, None, _) => unreachable!("non-root vertex without parent"),
                        });
                    }
                }
                let t = self.tab.canonicalize(&RawTree::from_parents(&parents)?)?;
                out.add_term(t, weight.clone());
                // advance the attachment odometer over non-root vertices
                let mut i = 1;
                loop {
                    if i >= m {
                        return Ok(());
                    }
                    let radix = blocks[self.parents[i].unwrap()].len();
                    targets[i] += 1;
                    if targets[i] < radix {
                        break;
                    }
                    targets[i] = 0;
                    i += 1;
                }
            }
        }
    }

    for (t, c) in x.terms() {
        let walk = Walk {
            tab,
            ys: &ys,
            parents: tab.preorder_parents(t),
            order,
        };
        if walk.parents.len() > order {
            continue;
        }
        walk.assign(0, 0, &mut Vec::new(), c.clone(), &mut out)?;
    }
    Ok(out)
}

/// Two-sided inverse of `y`, which must have a nonzero single-node coefficient.
///
/// Solves `z × y = v` grade by grade: on an `n`-node tree the product
/// contributes `y_1^n z_t` plus terms from smaller trees of `z` only.
pub fn invert(y: &TreeSeries) -> Result<TreeSeries> {
    let z = right_inverse(y)?;
    let check = compose(y, &z)?;
    assert_eq!(
        check,
        TreeSeries::unit_v(y.order())?,
        "right inverse is not a left inverse"
    );
    Ok(z)
}

fn right_inverse(y: &TreeSeries) -> Result<TreeSeries> {
    let lead = y.coeff(TreeId::ROOT);
    if lead.is_zero() {
        return Err(Error::NotInvertible);
    }
    let order = y.order();
    let tab = trees::table();
    let mut sub = Substitution::new(y);
    let mut acc = TreeSeries::zero(order)?;
    let mut z = TreeSeries::zero(order)?;
    for n in 1..=order {
        let scale = pow(&lead, n).recip();
        for &t in tab.trees_of_order(n) {
            let target = if n == 1 {
                Rational::one()
            } else {
                Rational::zero()
            };
            let zt = (target - acc.coeff(t)) * &scale;
            if zt.is_zero() {
                continue;
            }
            let img = sub.image(t)?;
            acc.add_scaled(&img, &zt);
            z.add_term(t, zt);
        }
    }
    Ok(z)
}

/// Inverse of `exp*` in the group.
pub fn log_star(order: usize) -> Result<TreeSeries> {
    invert(&exp_star(order)?)
}

/// `t ∘ s` on basis trees: substitute `s` at one vertex of `t` (the unit
/// everywhere else), reattaching that vertex's children anywhere in `s`.
fn insert_basis(tab: &TreeTable, t: TreeId, s: TreeId) -> HashMap<TreeId, i64> {
    let children = tab.tree(t).children();
    let mut forest = children.to_vec();
    forest.sort_unstable();
    let mut acc: HashMap<TreeId, i64> = tab.multi_graft(s, &forest).iter().copied().collect();
    let mut start = 0;
    for run in children.chunk_by(|a, b| a == b) {
        let mult = run.len() as i64;
        for (w, k) in insert_basis(tab, run[0], s) {
            let mut next = children.to_vec();
            next[start] = w;
            let u = tab.intern(next).expect("within table order");
            *acc.entry(u).or_default() += mult * k;
        }
        start += run.len();
    }
    acc.retain(|_, k| *k != 0);
    acc
}

/// Bilinear insertion product `x ∘ y`.
pub fn insertion(x: &TreeSeries, y: &TreeSeries) -> Result<TreeSeries> {
    let order = same_order(x, y)?;
    let tab = trees::table();
    let mut out = TreeSeries::zero(order)?;
    for (t, a) in x.terms() {
        for (s, b) in y.terms() {
            if tab.nodes(t) + tab.nodes(s) - 1 > order {
                continue;
            }
            let ab = a * b;
            for (w, k) in insert_basis(tab, t, s) {
                out.add_term(w, &ab * Rational::from_integer(BigInt::from(k)));
            }
        }
    }
    Ok(out)
}

/// `[x, y] = x ∘ y − y ∘ x`.
pub fn lie_bracket(x: &TreeSeries, y: &TreeSeries) -> Result<TreeSeries> {
    insertion(x, y)?.sub(&insertion(y, x)?)
}

/// `x ← y − y ← x`, kept apart from [`lie_bracket`].
pub fn graft_commutator(x: &TreeSeries, y: &TreeSeries) -> Result<TreeSeries> {
    x.graft_product(y)?.sub(&y.graft_product(x)?)
}
