//! Unlabeled rooted trees: canonical forms, enumeration and interning.
//!
//! Every tree is stored once in a [`TreeTable`]. Children are kept in
//! canonical order (more nodes first, then ascending code), and ids are
//! handed out by (node count, code), so the id of a tree does not depend on
//! the size of the table it lives in.

use std::cmp::Reverse;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

/// Largest order a table may be built to unless a cap is given explicitly.
pub const DEFAULT_MAX_ORDER: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeId(u32);

impl TreeId {
    /// The single-node tree.
    pub const ROOT: TreeId = TreeId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub(crate) fn from_index(i: usize) -> Self {
        TreeId(i as u32)
    }
}

/// Preorder child-count sequence of a canonical tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeCode(Vec<u32>);

impl TreeCode {
    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// Checks length, sum and the preorder prefix condition.
    pub fn validate(counts: &[u32]) -> Result<()> {
        let n = counts.len();
        if n == 0 {
            return Err(Error::MalformedCode("empty sequence".into()));
        }
        let total: u64 = counts.iter().map(|&c| c as u64).sum();
        if total != n as u64 - 1 {
            return Err(Error::MalformedCode(format!(
                "counts sum to {total}, expected {}",
                n - 1
            )));
        }
        let mut prefix = 0u64;
        for (k, &c) in counts.iter().enumerate().take(n - 1) {
            prefix += c as u64;
            if prefix < k as u64 + 1 {
                return Err(Error::MalformedCode(format!(
                    "sequence closes after {} nodes",
                    k + 1
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for TreeCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RootedTree {
    children: Vec<TreeId>,
    nodes: usize,
    aut: u64,
    depth: usize,
    code: TreeCode,
}

impl RootedTree {
    pub fn children(&self) -> &[TreeId] {
        &self.children
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Order of the automorphism group.
    pub fn aut(&self) -> u64 {
        self.aut
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn code(&self) -> &TreeCode {
        &self.code
    }
}

/// A rooted tree with arbitrarily ordered children, prior to interning.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawTree {
    pub children: Vec<RawTree>,
}

impl RawTree {
    pub fn leaf() -> Self {
        RawTree::default()
    }

    pub fn with_children(children: Vec<RawTree>) -> Self {
        RawTree { children }
    }

    pub fn nodes(&self) -> usize {
        1 + self.children.iter().map(RawTree::nodes).sum::<usize>()
    }

    /// Builds a tree from a preorder child-count sequence, in the order given.
    pub fn from_counts(counts: &[u32]) -> Result<Self> {
        TreeCode::validate(counts)?;
        fn take(counts: &[u32], pos: &mut usize) -> RawTree {
            let k = counts[*pos];
            *pos += 1;
            RawTree {
                children: (0..k).map(|_| take(counts, pos)).collect(),
            }
        }
        let mut pos = 0;
        Ok(take(counts, &mut pos))
    }

    /// Builds a tree from a parent array; exactly one entry must be `None`.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self> {
        let n = parents.len();
        let mut kids = vec![Vec::new(); n];
        let mut root = None;
        for (v, p) in parents.iter().enumerate() {
            match p {
                None if root.is_none() => root = Some(v),
                None => return Err(Error::MalformedCode("several roots".into())),
                Some(p) if *p < n && *p != v => kids[*p].push(v),
                Some(_) => return Err(Error::MalformedCode("bad parent index".into())),
            }
        }
        let root = root.ok_or_else(|| Error::MalformedCode("no root".into()))?;
        fn build(v: usize, kids: &[Vec<usize>], seen: &mut usize) -> RawTree {
            *seen += 1;
            RawTree {
                children: kids[v].iter().map(|&c| build(c, kids, seen)).collect(),
            }
        }
        let mut seen = 0;
        let raw = build(root, &kids, &mut seen);
        if seen != n {
            return Err(Error::MalformedCode("parent array has a cycle".into()));
        }
        Ok(raw)
    }
}

type Terms<C> = Arc<[(TreeId, C)]>;

/// Keyed by a tree and the sorted forest grafted onto it.
type StarMemo = HashMap<(TreeId, Vec<TreeId>), Terms<i64>>;

pub struct TreeTable {
    max_order: usize,
    trees: Vec<RootedTree>,
    by_order: Vec<Vec<TreeId>>,
    index: HashMap<Vec<TreeId>, TreeId>,
    graft_memo: RwLock<HashMap<(TreeId, TreeId), Terms<u64>>>,
    star_memo: RwLock<StarMemo>,
}

impl fmt::Debug for TreeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TreeTable")
            .field("max_order", &self.max_order)
            .field("trees", &self.trees.len())
            .finish()
    }
}

/// All canonical trees with at most `n` nodes, capped at [`DEFAULT_MAX_ORDER`].
pub fn enumerate_up_to(n: usize) -> Result<TreeTable> {
    enumerate_with_cap(n, DEFAULT_MAX_ORDER)
}

pub fn enumerate_with_cap(n: usize, cap: usize) -> Result<TreeTable> {
    if n == 0 {
        return Err(Error::ZeroOrder);
    }
    if n > cap {
        return Err(Error::OrderTooLarge { requested: n, cap });
    }
    Ok(TreeTable::build(n))
}

/// Shared table holding every tree up to [`DEFAULT_MAX_ORDER`].
pub fn table() -> &'static TreeTable {
    static TABLE: OnceLock<TreeTable> = OnceLock::new();
    TABLE.get_or_init(|| TreeTable::build(DEFAULT_MAX_ORDER))
}

impl TreeTable {
    fn build(max_order: usize) -> Self {
        let mut table = TreeTable {
            max_order,
            trees: Vec::new(),
            by_order: vec![Vec::new(); max_order + 1],
            index: HashMap::new(),
            graft_memo: RwLock::new(HashMap::new()),
            star_memo: RwLock::new(HashMap::new()),
        };
        for n in 1..=max_order {
            let mut pool: Vec<TreeId> = (0..table.trees.len() as u32).map(TreeId).collect();
            pool.sort_by_key(|&t| table.sibling_key(t));
            let mut forests = Vec::new();
            forests_of(&table, &pool, 0, n - 1, &mut Vec::new(), &mut forests);
            let mut fresh: Vec<RootedTree> =
                forests.into_iter().map(|f| table.assemble(f)).collect();
            fresh.sort_by(|a, b| a.code.cmp(&b.code));
            for tree in fresh {
                let id = TreeId(table.trees.len() as u32);
                table.index.insert(tree.children.clone(), id);
                table.by_order[n].push(id);
                table.trees.push(tree);
            }
        }
        table
    }

    fn assemble(&self, children: Vec<TreeId>) -> RootedTree {
        let mut nodes = 1;
        let mut depth = 0;
        let mut aut = 1u64;
        let mut code = vec![children.len() as u32];
        for run in children.chunk_by(|a, b| a == b) {
            let child = self.tree(run[0]);
            let mult = run.len() as u64;
            aut *= (1..=mult).product::<u64>() * child.aut.pow(mult as u32);
        }
        for &c in &children {
            let child = self.tree(c);
            nodes += child.nodes;
            depth = depth.max(child.depth);
            code.extend_from_slice(&child.code.0);
        }
        RootedTree {
            children,
            nodes,
            aut,
            depth: depth + 1,
            code: TreeCode(code),
        }
    }

    fn sibling_key(&self, t: TreeId) -> (Reverse<usize>, TreeId) {
        (Reverse(self.tree(t).nodes), t)
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn tree(&self, t: TreeId) -> &RootedTree {
        &self.trees[t.index()]
    }

    pub fn nodes(&self, t: TreeId) -> usize {
        self.tree(t).nodes
    }

    pub fn trees_of_order(&self, n: usize) -> &[TreeId] {
        self.by_order.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Ids of every tree with at most `n` nodes, in id order.
    pub fn ids_up_to(&self, n: usize) -> impl Iterator<Item = TreeId> + '_ {
        (1..=n.min(self.max_order)).flat_map(move |k| self.by_order[k].iter().copied())
    }

    pub fn symmetry_factor(&self, t: TreeId) -> u64 {
        self.tree(t).aut
    }

    pub fn depth(&self, t: TreeId) -> usize {
        self.tree(t).depth
    }

    /// No vertex has more than one child.
    pub fn is_linear(&self, t: TreeId) -> bool {
        self.tree(t).code.0.iter().all(|&c| c <= 1)
    }

    /// Depth at most two: a root and leaves.
    pub fn is_corolla(&self, t: TreeId) -> bool {
        self.tree(t).depth <= 2
    }

    /// Interns a child multiset given in any order.
    pub fn intern(&self, mut children: Vec<TreeId>) -> Option<TreeId> {
        children.sort_by_key(|&c| self.sibling_key(c));
        self.index.get(&children).copied()
    }

    fn intern_or_err(&self, children: Vec<TreeId>) -> Result<TreeId> {
        let nodes = 1 + children.iter().map(|&c| self.nodes(c)).sum::<usize>();
        self.intern(children).ok_or(Error::OrderTooLarge {
            requested: nodes,
            cap: self.max_order,
        })
    }

    pub fn canonicalize(&self, raw: &RawTree) -> Result<TreeId> {
        let nodes = raw.nodes();
        if nodes > self.max_order {
            return Err(Error::OrderTooLarge {
                requested: nodes,
                cap: self.max_order,
            });
        }
        self.canonicalize_within(raw)
    }

    fn canonicalize_within(&self, raw: &RawTree) -> Result<TreeId> {
        let children = raw
            .children
            .iter()
            .map(|c| self.canonicalize_within(c))
            .collect::<Result<Vec<_>>>()?;
        self.intern_or_err(children)
    }

    pub fn chain(&self, n: usize) -> Option<TreeId> {
        let mut t = RawTree::leaf();
        for _ in 1..n {
            t = RawTree::with_children(vec![t]);
        }
        (n >= 1).then(|| self.canonicalize(&t).ok()).flatten()
    }

    pub fn corolla(&self, n: usize) -> Option<TreeId> {
        if n == 0 {
            return None;
        }
        self.intern(vec![TreeId::ROOT; n - 1])
    }

    pub fn to_raw(&self, t: TreeId) -> RawTree {
        RawTree {
            children: self
                .tree(t)
                .children
                .iter()
                .map(|&c| self.to_raw(c))
                .collect(),
        }
    }

    /// Parent of every vertex in the canonical preorder labeling.
    pub fn preorder_parents(&self, t: TreeId) -> Vec<Option<usize>> {
        let counts = &self.tree(t).code.0;
        let mut parents = Vec::with_capacity(counts.len());
        let mut open: Vec<(usize, u32)> = Vec::new();
        for (v, &k) in counts.iter().enumerate() {
            let parent = open.last().map(|&(p, _)| p);
            if let Some(top) = open.last_mut() {
                top.1 -= 1;
                if top.1 == 0 {
                    open.pop();
                }
            }
            parents.push(parent);
            if k > 0 {
                open.push((v, k));
            }
        }
        parents
    }

    pub fn parse_code(&self, text: &str) -> Result<TreeId> {
        let counts = parse_counts(text)?;
        self.canonicalize(&RawTree::from_counts(&counts)?)
    }

    pub fn format_code(&self, t: TreeId) -> String {
        self.tree(t).code.to_string()
    }

    /// Attaches the root of `s` as a new child of preorder vertex `v` of `t`.
    pub fn graft(&self, t: TreeId, s: TreeId, v: usize) -> Result<TreeId> {
        let nodes = self.nodes(t);
        if v >= nodes {
            return Err(Error::VertexOutOfRange { index: v, nodes });
        }
        self.graft_at(t, s, v)
    }

    fn graft_at(&self, t: TreeId, s: TreeId, v: usize) -> Result<TreeId> {
        let mut children = self.tree(t).children.clone();
        if v == 0 {
            children.push(s);
            return self.intern_or_err(children);
        }
        let mut rest = v - 1;
        for slot in children.iter_mut() {
            let size = self.nodes(*slot);
            if rest < size {
                *slot = self.graft_at(*slot, s, rest)?;
                return self.intern_or_err(children);
            }
            rest -= size;
        }
        unreachable!("preorder index checked by caller")
    }

    /// `t ← s`: the sum of `graft(t, s, v)` over all vertices `v`, with
    /// multiplicities. Requires `nodes(t) + nodes(s) <= max_order`.
    pub fn graft_sum(&self, t: TreeId, s: TreeId) -> Terms<u64> {
        if let Some(hit) = self.graft_memo.read().unwrap().get(&(t, s)) {
            return hit.clone();
        }
        assert!(self.nodes(t) + self.nodes(s) <= self.max_order);
        let children = &self.tree(t).children;
        let mut acc: HashMap<TreeId, u64> = HashMap::new();
        let mut at_root = children.clone();
        at_root.push(s);
        *acc.entry(self.intern(at_root).unwrap()).or_default() += 1;
        let mut start = 0;
        for run in children.chunk_by(|a, b| a == b) {
            let mult = run.len() as u64;
            for &(w, k) in self.graft_sum(run[0], s).iter() {
                let mut next = children.clone();
                next[start] = w;
                *acc.entry(self.intern(next).unwrap()).or_default() += mult * k;
            }
            start += run.len();
        }
        let terms: Terms<u64> = sorted_terms(acc).into();
        self.graft_memo
            .write()
            .unwrap()
            .insert((t, s), terms.clone());
        terms
    }

    /// Attaches every tree of the forest `forest` to an arbitrary vertex of
    /// `s`, summed over all attachment maps. `forest` must be sorted by id.
    ///
    /// Computed through the recursion
    /// `s{m, r} = s{m} ← r − Σ_u s{m \ u, u ← r}`.
    pub fn multi_graft(&self, s: TreeId, forest: &[TreeId]) -> Terms<i64> {
        let Some((&last, rest)) = forest.split_last() else {
            return vec![(s, 1)].into();
        };
        let key = (s, forest.to_vec());
        if let Some(hit) = self.star_memo.read().unwrap().get(&key) {
            return hit.clone();
        }
        let mut acc: HashMap<TreeId, i64> = HashMap::new();
        for &(w, c) in self.multi_graft(s, rest).iter() {
            for &(u, k) in self.graft_sum(w, last).iter() {
                *acc.entry(u).or_default() += c * k as i64;
            }
        }
        let mut start = 0;
        for run in rest.chunk_by(|a, b| a == b) {
            let mult = run.len() as i64;
            for &(grafted, k) in self.graft_sum(run[0], last).iter() {
                let mut next = rest.to_vec();
                next[start] = grafted;
                next.sort_unstable();
                for &(w, c) in self.multi_graft(s, &next).iter() {
                    *acc.entry(w).or_default() -= mult * k as i64 * c;
                }
            }
            start += run.len();
        }
        acc.retain(|_, c| *c != 0);
        let terms: Terms<i64> = sorted_terms(acc).into();
        self.star_memo.write().unwrap().insert(key, terms.clone());
        terms
    }
}

fn sorted_terms<C>(acc: HashMap<TreeId, C>) -> Vec<(TreeId, C)> {
    let mut terms: Vec<_> = acc.into_iter().collect();
    terms.sort_unstable_by_key(|&(t, _)| t);
    terms
}

fn forests_of(
    table: &TreeTable,
    pool: &[TreeId],
    start: usize,
    remaining: usize,
    current: &mut Vec<TreeId>,
    out: &mut Vec<Vec<TreeId>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for (i, &t) in pool.iter().enumerate().skip(start) {
        let size = table.nodes(t);
        if size <= remaining {
            current.push(t);
            forests_of(table, pool, i, remaining - size, current, out);
            current.pop();
        }
    }
}

/// Reads `1,1,0` or the compact form `110` into a count sequence.
pub fn parse_counts(text: &str) -> Result<Vec<u32>> {
    if text.is_empty() {
        return Err(Error::MalformedCode("empty input".into()));
    }
    let bad = |s: &str| Error::MalformedCode(format!("not a count: {s:?}"));
    if text.contains(',') {
        text.split(',')
            .map(|p| {
                if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
                    Err(bad(p))
                } else {
                    p.parse::<u32>().map_err(|_| bad(p))
                }
            })
            .collect()
    } else {
        text.chars()
            .map(|c| c.to_digit(10).ok_or_else(|| bad(&c.to_string())))
            .collect()
    }
}
