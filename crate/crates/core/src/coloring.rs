//! Proper colorings: validation, exact chromatic number and enumeration.
//!
//! Colors are 1-based. A [`Coloring`] only guarantees that every entry lies in
//! `1..=k`; properness is checked separately so that improper assignments can
//! be reported.

use std::fmt;

use serde::Serialize;

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub type Color = u8;

/// Largest palette representable in a [`ColorSet`].
pub const MAX_PALETTE: usize = 64;

/// Serializes as a bare array of 1-based colors.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Coloring {
    colors: Vec<Color>,
    #[serde(skip)]
    k: Color,
}

impl Coloring {
    pub fn new(colors: Vec<Color>, k: Color) -> Result<Self> {
        if k as usize > MAX_PALETTE {
            return Err(Error::TooLarge {
                what: "palette",
                got: k as usize,
                limit: MAX_PALETTE,
            });
        }
        if let Some(&c) = colors.iter().find(|&&c| c == 0 || c > k) {
            return Err(Error::ColorOutOfRange { color: c, k });
        }
        Ok(Self { colors, k })
    }

    pub(crate) fn new_unchecked(colors: Vec<Color>, k: Color) -> Self {
        debug_assert!(colors.iter().all(|&c| c >= 1 && c <= k));
        Self { colors, k }
    }

    pub fn k(&self) -> Color {
        self.k
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, v: usize) -> Color {
        self.colors[v]
    }

    pub fn set(&mut self, v: usize, c: Color) {
        debug_assert!(c >= 1 && c <= self.k);
        self.colors[v] = c;
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.colors
    }

    pub fn into_vec(self) -> Vec<Color> {
        self.colors
    }

    /// Same assignment viewed in a different palette size.
    pub fn with_palette(&self, k: Color) -> Result<Self> {
        Self::new(self.colors.clone(), k)
    }

    /// The set of colors used on `s`.
    pub fn colors_on(&self, s: &VertexSet) -> ColorSet {
        s.iter().map(|v| self.colors[v]).collect()
    }

    pub fn used_colors(&self) -> ColorSet {
        self.colors.iter().copied().collect()
    }

    /// Restriction to the vertices listed in `map` (new index -> old vertex).
    pub fn restrict(&self, map: &[usize]) -> Coloring {
        Coloring::new_unchecked(map.iter().map(|&v| self.colors[v]).collect(), self.k)
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{}", self.colors, self.k)
    }
}

/// A set of colors from `1..=64`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet(u64);

impl ColorSet {
    pub fn empty() -> Self {
        ColorSet(0)
    }

    /// `{1, .., k}`.
    pub fn palette(k: Color) -> Self {
        if k as usize >= 64 {
            ColorSet(u64::MAX)
        } else {
            ColorSet((1u64 << k) - 1)
        }
    }

    pub fn insert(&mut self, c: Color) {
        self.0 |= 1 << (c - 1);
    }

    pub fn remove(&mut self, c: Color) {
        self.0 &= !(1 << (c - 1));
    }

    pub fn contains(self, c: Color) -> bool {
        c >= 1 && self.0 & (1 << (c - 1)) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: Self) -> Self {
        ColorSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        ColorSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        ColorSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn min(self) -> Option<Color> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as Color + 1)
    }

    pub fn iter(self) -> impl Iterator<Item = Color> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            (bits != 0).then(|| {
                let c = bits.trailing_zeros() as Color + 1;
                bits &= bits - 1;
                c
            })
        })
    }

    pub fn to_vec(self) -> Vec<Color> {
        self.iter().collect()
    }
}

impl FromIterator<Color> for ColorSet {
    fn from_iter<I: IntoIterator<Item = Color>>(iter: I) -> Self {
        let mut s = ColorSet::empty();
        for c in iter {
            s.insert(c);
        }
        s
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for ColorSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

pub fn is_proper(g: &Graph, c: &Coloring) -> Result<bool> {
    if c.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: c.len(),
        });
    }
    Ok(is_proper_slice(g, c.as_slice()))
}

pub(crate) fn is_proper_slice(g: &Graph, colors: &[Color]) -> bool {
    g.edges().iter().all(|&(u, v)| colors[u] != colors[v])
}

/// Greedy maximal clique, largest-degree first; a lower bound on χ.
fn greedy_clique(g: &Graph) -> usize {
    let mut best = 0;
    for start in 0..g.n() {
        let mut clique = VertexSet::singleton(start);
        let mut cand = g.neighbors(start).clone();
        while let Some(v) = cand
            .iter()
            .max_by_key(|&v| (g.neighbors(v).intersection_len(&cand), usize::MAX - v))
        {
            clique.insert(v);
            cand = cand.intersection(g.neighbors(v));
        }
        best = best.max(clique.len());
    }
    best
}

struct Dsatur<'a> {
    g: &'a Graph,
    k: usize,
    colors: Vec<Color>,
    // per vertex: how many neighbours carry each color
    counts: Vec<[u8; MAX_PALETTE + 1]>,
}

impl<'a> Dsatur<'a> {
    fn new(g: &'a Graph, k: usize) -> Self {
        Self {
            g,
            k,
            colors: vec![0; g.n()],
            counts: vec![[0; MAX_PALETTE + 1]; g.n()],
        }
    }

    fn saturation(&self, v: usize) -> usize {
        self.counts[v][1..=self.k].iter().filter(|&&c| c > 0).count()
    }

    fn assign(&mut self, v: usize, c: Color) {
        self.colors[v] = c;
        for u in self.g.neighbors(v) {
            self.counts[u][c as usize] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.colors[v];
        self.colors[v] = 0;
        for u in self.g.neighbors(v) {
            self.counts[u][c as usize] -= 1;
        }
    }

    /// Backtracking k-colorability; new colors are opened in increasing
    /// order so color-permuted branches are never revisited.
    fn solve(&mut self, colored: usize, max_used: usize) -> bool {
        if colored == self.g.n() {
            return true;
        }
        let v = (0..self.g.n())
            .filter(|&v| self.colors[v] == 0)
            .max_by_key(|&v| (self.saturation(v), self.g.degree(v), usize::MAX - v))
            .expect("uncolored vertex");
        let limit = (max_used + 1).min(self.k);
        for c in 1..=limit {
            if self.counts[v][c] == 0 {
                self.assign(v, c as Color);
                if self.solve(colored + 1, max_used.max(c)) {
                    return true;
                }
                self.unassign(v);
            }
        }
        false
    }
}

/// A proper `k`-coloring if one exists.
pub fn find_k_coloring(g: &Graph, k: usize) -> Option<Coloring> {
    if g.n() == 0 {
        return Some(Coloring::new_unchecked(Vec::new(), k as Color));
    }
    if k == 0 || k > MAX_PALETTE {
        return None;
    }
    let mut d = Dsatur::new(g, k);
    d.solve(0, 0)
        .then(|| Coloring::new_unchecked(d.colors, k as Color))
}

/// Exact chromatic number together with one optimal coloring (colors
/// `1..=χ`, normalised so colors first appear in vertex order).
pub fn chromatic_number(g: &Graph) -> Result<(usize, Coloring)> {
    if g.n() > 64 {
        return Err(Error::TooLarge {
            what: "vertex count",
            got: g.n(),
            limit: 64,
        });
    }
    if g.n() == 0 {
        return Ok((0, Coloring::new_unchecked(Vec::new(), 0)));
    }
    let lower = greedy_clique(g).max(1);
    for k in lower..=g.n() {
        if let Some(c) = find_k_coloring(g, k) {
            return Ok((k, normalize(&c)));
        }
    }
    unreachable!("n colors always suffice")
}

/// `χ(g)` only.
pub fn chi(g: &Graph) -> usize {
    chromatic_number(g).expect("n <= 64").0
}

/// Renames colors so they first appear in increasing order along the vertex
/// order; palette becomes the number of colors used.
pub fn normalize(c: &Coloring) -> Coloring {
    let mut rename = [0 as Color; MAX_PALETTE + 1];
    let mut next = 0;
    let colors = c
        .as_slice()
        .iter()
        .map(|&x| {
            if rename[x as usize] == 0 {
                next += 1;
                rename[x as usize] = next;
            }
            rename[x as usize]
        })
        .collect();
    Coloring::new_unchecked(colors, next.max(1))
}

/// Calls `f` on every proper `k`-coloring whose first `prefix.len()` entries
/// equal `prefix`, in lexicographic order. Stops early when `f` returns
/// `false`; the return value says whether enumeration ran to completion.
pub fn for_each_coloring_with_prefix(
    g: &Graph,
    k: Color,
    prefix: &[Color],
    mut f: impl FnMut(&[Color]) -> bool,
) -> bool {
    let n = g.n();
    let mut colors = vec![0 as Color; n];
    for (v, &c) in prefix.iter().enumerate() {
        if c == 0 || c > k {
            return true;
        }
        colors[v] = c;
    }
    if !is_proper_prefix(g, &colors, prefix.len()) {
        return true;
    }
    if n == 0 {
        return f(&colors);
    }
    // earlier neighbours of each vertex (lower index)
    let back: Vec<Vec<usize>> = (0..n)
        .map(|v| g.neighbors(v).iter().filter(|&u| u < v).collect())
        .collect();
    let start = prefix.len();
    if start == n {
        return f(&colors);
    }
    let mut v = start;
    colors[v] = 0;
    loop {
        // advance vertex v to its next feasible color
        let mut c = colors[v] + 1;
        while c <= k && back[v].iter().any(|&u| colors[u] == c) {
            c += 1;
        }
        if c > k {
            colors[v] = 0;
            if v == start {
                return true;
            }
            v -= 1;
            continue;
        }
        colors[v] = c;
        if v + 1 == n {
            if !f(&colors) {
                return false;
            }
        } else {
            v += 1;
            colors[v] = 0;
        }
    }
}

fn is_proper_prefix(g: &Graph, colors: &[Color], len: usize) -> bool {
    (0..len).all(|v| g.neighbors(v).iter().all(|u| u >= len || colors[u] != colors[v]))
}

pub fn for_each_coloring(g: &Graph, k: Color, f: impl FnMut(&[Color]) -> bool) -> bool {
    for_each_coloring_with_prefix(g, k, &[], f)
}

/// All proper `k`-colorings in lexicographic order.
pub fn enumerate_colorings(g: &Graph, k: Color) -> Vec<Coloring> {
    let mut out = Vec::new();
    for_each_coloring(g, k, |c| {
        out.push(Coloring::new_unchecked(c.to_vec(), k));
        true
    });
    out
}

/// Number of proper `k`-colorings, or `None` once the count exceeds `limit`.
pub fn count_colorings(g: &Graph, k: Color, limit: u64) -> Option<u64> {
    let mut count = 0u64;
    let finished = for_each_coloring(g, k, |_| {
        count += 1;
        count <= limit
    });
    finished.then_some(count)
}

/// Completes a partial proper coloring (`None` = unset), trying colors in
/// increasing order on unset vertices in vertex order; the result is the
/// lexicographically first completion.
pub fn extend_coloring(g: &Graph, partial: &[Option<Color>], k: Color) -> Result<Option<Coloring>> {
    if partial.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: partial.len(),
        });
    }
    let mut colors: Vec<Color> = partial.iter().map(|c| c.unwrap_or(0)).collect();
    if let Some(&c) = colors.iter().find(|&&c| c > k) {
        return Err(Error::ColorOutOfRange { color: c, k });
    }
    for (u, v) in g.edges() {
        if colors[u] != 0 && colors[u] == colors[v] {
            return Err(Error::PreconditionViolated(format!(
                "partial coloring already conflicts on edge {u}-{v}"
            )));
        }
    }
    let free: Vec<usize> = (0..g.n()).filter(|&v| colors[v] == 0).collect();
    fn go(g: &Graph, k: Color, free: &[usize], i: usize, colors: &mut [Color]) -> bool {
        if i == free.len() {
            return true;
        }
        let v = free[i];
        let blocked = neighbor_colors_partial(g, colors, v);
        for c in 1..=k {
            if !blocked.contains(c) {
                colors[v] = c;
                if go(g, k, free, i + 1, colors) {
                    return true;
                }
            }
        }
        colors[v] = 0;
        false
    }
    Ok(go(g, k, &free, 0, &mut colors).then(|| Coloring::new_unchecked(colors, k)))
}

fn neighbor_colors_partial(g: &Graph, colors: &[Color], v: usize) -> ColorSet {
    g.neighbors(v)
        .iter()
        .map(|u| colors[u])
        .filter(|&c| c != 0)
        .collect()
}
