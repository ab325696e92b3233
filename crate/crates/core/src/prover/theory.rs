use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::syntax::{CatPresentation, Name, Path};

use super::ProverError;

/// Which part of a collage a sort or symbol came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Plain,
    Left,
    Pro,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortInfo {
    /// Unique display name inside the theory.
    pub name: Name,
    /// Name in the presentation it came from.
    pub local: Name,
    pub origin: Origin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunInfo {
    pub name: Name,
    pub local: Name,
    pub src: u32,
    pub tgt: u32,
    pub origin: Origin,
}

/// A typed word: symbol indices plus explicit endpoints, so identities on
/// different sorts stay distinct.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Word {
    pub src: u32,
    pub tgt: u32,
    pub syms: Vec<u32>,
}

impl Word {
    pub fn identity(sort: u32) -> Self {
        Word { src: sort, tgt: sort, syms: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.syms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syms.is_empty()
    }
}

/// A compiled presentation: flat indices, the equations as typed words and
/// the symbol ranks and weights that drive the reduction order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    name: Name,
    sorts: Vec<SortInfo>,
    funs: Vec<FunInfo>,
    eqs: Vec<(Word, Word)>,
    rank: Vec<u32>,
    weight: Vec<u32>,
    out: Vec<Vec<u32>>,
    fun_lookup: HashMap<(Origin, Name), u32>,
    sort_lookup: HashMap<(Origin, Name), u32>,
}

#[derive(Default)]
pub struct TheoryBuilder {
    name: Option<Name>,
    sorts: Vec<SortInfo>,
    funs: Vec<FunInfo>,
    eqs: Vec<(Word, Word)>,
    order: Vec<u32>,
    weights: HashMap<u32, u32>,
}

fn unique(name: &Name, tag: &Name, taken: &dyn Fn(&str) -> bool) -> Name {
    if !taken(name.as_str()) {
        return name.clone();
    }
    let mut candidate = format!("{name}_{tag}");
    while taken(&candidate) {
        candidate.push('\'');
    }
    Name::new(candidate)
}

impl TheoryBuilder {
    pub fn new(name: impl Into<Name>) -> Self {
        TheoryBuilder { name: Some(name.into()), ..Default::default() }
    }

    /// Adds a sort; `tag` disambiguates the display name on collision.
    pub fn sort(&mut self, local: &Name, origin: Origin, tag: &Name) -> u32 {
        let name = unique(local, tag, &|s| self.sorts.iter().any(|x| x.name.as_str() == s));
        self.sorts.push(SortInfo { name, local: local.clone(), origin });
        (self.sorts.len() - 1) as u32
    }

    pub fn fun(&mut self, local: &Name, src: u32, tgt: u32, origin: Origin, tag: &Name) -> u32 {
        let name = unique(local, tag, &|s| self.funs.iter().any(|x| x.name.as_str() == s));
        self.funs.push(FunInfo { name, local: local.clone(), src, tgt, origin });
        (self.funs.len() - 1) as u32
    }

    /// Appends symbols to the precedence list (earlier is smaller).
    pub fn rank_next(&mut self, funs: impl IntoIterator<Item = u32>) {
        self.order.extend(funs);
    }

    /// Sets the weight of `f` in the reduction order; symbols default to 1.
    pub fn weigh(&mut self, f: u32, weight: u32) {
        self.weights.insert(f, weight.max(1));
    }

    pub fn eq(&mut self, lhs: Word, rhs: Word) {
        self.eqs.push((lhs, rhs));
    }

    /// Adds every sort, symbol and equation of `cat`, returning sort and symbol indices.
    pub fn category(&mut self, cat: &CatPresentation, origin: Origin) -> Result<(Vec<u32>, Vec<u32>), ProverError> {
        let tag = cat.name().clone();
        let sorts: Vec<u32> = cat.sorts().iter().map(|s| self.sort(s, origin, &tag)).collect();
        let sort_of = |n: &Name| -> Result<u32, ProverError> {
            cat.sorts().iter().position(|s| s == n).map(|i| sorts[i]).ok_or_else(|| ProverError::UnknownSort(n.clone()))
        };
        let mut funs = Vec::new();
        for f in cat.funs() {
            let (s, t) = (sort_of(&f.src)?, sort_of(&f.tgt)?);
            funs.push(self.fun(&f.name, s, t, origin, &tag));
        }
        let order = cat.term_order();
        for o in &order {
            let i = cat.fun_index(o.as_str()).ok_or_else(|| ProverError::UnknownSymbol(o.clone()))?;
            self.order.push(funs[i]);
        }
        for eq in cat.eqs() {
            let l = word_in(cat, &sorts, &funs, &eq.lhs)?;
            let r = word_in(cat, &sorts, &funs, &eq.rhs)?;
            if l.src != r.src || l.tgt != r.tgt {
                return Err(ProverError::NonParallel { lhs: eq.lhs.to_string(), rhs: eq.rhs.to_string() });
            }
            self.eqs.push((l, r));
        }
        Ok((sorts, funs))
    }

    pub fn build(self) -> Theory {
        let mut rank = vec![u32::MAX; self.funs.len()];
        let mut next = 0u32;
        for f in self.order {
            if rank[f as usize] == u32::MAX {
                rank[f as usize] = next;
                next += 1;
            }
        }
        for r in rank.iter_mut() {
            if *r == u32::MAX {
                *r = next;
                next += 1;
            }
        }
        let mut out = vec![Vec::new(); self.sorts.len()];
        for (i, f) in self.funs.iter().enumerate() {
            out[f.src as usize].push(i as u32);
        }
        for o in &mut out {
            o.sort_by_key(|&f| rank[f as usize]);
        }
        let weight = (0..self.funs.len() as u32).map(|f| self.weights.get(&f).copied().unwrap_or(1)).collect();
        let fun_lookup = self.funs.iter().enumerate().map(|(i, f)| ((f.origin, f.local.clone()), i as u32)).collect();
        let sort_lookup = self.sorts.iter().enumerate().map(|(i, s)| ((s.origin, s.local.clone()), i as u32)).collect();
        Theory {
            name: self.name.unwrap_or_else(|| Name::new("T")),
            sorts: self.sorts,
            funs: self.funs,
            eqs: self.eqs,
            rank,
            weight,
            out,
            fun_lookup,
            sort_lookup,
        }
    }
}

fn word_in(cat: &CatPresentation, sorts: &[u32], funs: &[u32], p: &Path) -> Result<Word, ProverError> {
    cat.check_path(p).map_err(ProverError::Syntax)?;
    let src = sorts[cat.sorts().iter().position(|s| s == p.src()).expect("checked")];
    let tgt = sorts[cat.sorts().iter().position(|s| s == p.tgt()).expect("checked")];
    let syms = p.syms().iter().map(|s| funs[cat.fun_index(s.as_str()).expect("checked")]).collect();
    Ok(Word { src, tgt, syms })
}

impl Theory {
    pub fn from_category(cat: &CatPresentation) -> Result<Theory, ProverError> {
        let mut b = TheoryBuilder::new(cat.name().clone());
        b.category(cat, Origin::Plain)?;
        Ok(b.build())
    }

    pub fn name(&self) -> &Name {
        &self.name
    }

    pub fn sorts(&self) -> &[SortInfo] {
        &self.sorts
    }

    pub fn funs(&self) -> &[FunInfo] {
        &self.funs
    }

    pub fn eqs(&self) -> &[(Word, Word)] {
        &self.eqs
    }

    pub(crate) fn set_eqs(&mut self, eqs: Vec<(Word, Word)>) {
        self.eqs = eqs;
    }

    pub fn rank(&self, f: u32) -> u32 {
        self.rank[f as usize]
    }

    /// Symbols leaving `sort`, smallest rank first.
    pub fn out_funs(&self, sort: u32) -> &[u32] {
        &self.out[sort as usize]
    }

    pub fn fun_id(&self, origin: Origin, local: &str) -> Option<u32> {
        self.fun_lookup.get(&(origin, Name::new(local))).copied()
    }

    pub fn sort_id(&self, origin: Origin, local: &str) -> Option<u32> {
        self.sort_lookup.get(&(origin, Name::new(local))).copied()
    }

    /// Shortlex: shorter first, then lexicographic by symbol rank.
    pub fn cmp_shortlex(&self, a: &[u32], b: &[u32]) -> Ordering {
        a.len().cmp(&b.len()).then_with(|| {
            for (x, y) in a.iter().zip(b) {
                match self.rank(*x).cmp(&self.rank(*y)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }

    /// Total weight, then shortlex; the orientation order of completion.
    /// With unit weights this is shortlex.
    pub fn cmp_reduction(&self, a: &[u32], b: &[u32]) -> Ordering {
        let w = |s: &[u32]| s.iter().map(|&f| u64::from(self.weight[f as usize])).sum::<u64>();
        w(a).cmp(&w(b)).then_with(|| self.cmp_shortlex(a, b))
    }

    pub fn weight(&self, f: u32) -> u32 {
        self.weight[f as usize]
    }

    pub fn is_weighted(&self) -> bool {
        self.weight.iter().any(|&w| w != 1)
    }

    /// Types a nonempty symbol sequence, or returns the identity on `fallback`.
    pub fn typed(&self, syms: Vec<u32>, fallback: u32) -> Word {
        match (syms.first(), syms.last()) {
            (Some(&f), Some(&l)) => Word { src: self.funs[f as usize].src, tgt: self.funs[l as usize].tgt, syms },
            _ => Word::identity(fallback),
        }
    }

    pub fn is_well_typed(&self, w: &Word) -> bool {
        if (w.src as usize) >= self.sorts.len() || (w.tgt as usize) >= self.sorts.len() {
            return false;
        }
        let mut cur = w.src;
        for &f in &w.syms {
            let Some(info) = self.funs.get(f as usize) else { return false };
            if info.src != cur {
                return false;
            }
            cur = info.tgt;
        }
        cur == w.tgt
    }

    /// Compiles a path whose symbols all come from the part tagged `origin`.
    pub fn word(&self, origin: Origin, p: &Path) -> Result<Word, ProverError> {
        let src = self.sort_id(origin, p.src().as_str()).ok_or_else(|| ProverError::UnknownSort(p.src().clone()))?;
        let mut syms = Vec::with_capacity(p.len());
        for s in p.syms() {
            syms.push(self.fun_id(origin, s.as_str()).ok_or_else(|| ProverError::UnknownSymbol(s.clone()))?);
        }
        let w = self.typed(syms, src);
        if w.src != src || !self.is_well_typed(&w) {
            return Err(ProverError::IllTyped(p.to_string()));
        }
        Ok(w)
    }

    /// Concatenation of typed words; `None` when endpoints disagree.
    pub fn concat(&self, a: &Word, b: &Word) -> Option<Word> {
        if a.tgt != b.src {
            return None;
        }
        let mut syms = a.syms.clone();
        syms.extend_from_slice(&b.syms);
        Some(Word { src: a.src, tgt: b.tgt, syms })
    }

    /// Back to a named path over the display names.
    pub fn path(&self, w: &Word) -> Path {
        Path::new_unchecked(
            self.sorts[w.src as usize].name.clone(),
            self.sorts[w.tgt as usize].name.clone(),
            w.syms.iter().map(|&f| self.funs[f as usize].name.clone()).collect(),
        )
    }

    /// Named path using local names; only meaningful for single-origin words.
    pub fn local_path(&self, w: &Word) -> Path {
        Path::new_unchecked(
            self.sorts[w.src as usize].local.clone(),
            self.sorts[w.tgt as usize].local.clone(),
            w.syms.iter().map(|&f| self.funs[f as usize].local.clone()).collect(),
        )
    }

    pub fn render(&self, w: &Word) -> String {
        self.path(w).to_string()
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Theory, &'a Word);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.render(self.1))
            }
        }
        D(self, w)
    }

    /// Parses dot-separated display names (or `id(sort)`).
    pub fn parse_word(&self, text: &str) -> Result<Word, ProverError> {
        let text = text.trim();
        if let Some(inner) = text.strip_prefix("id(").and_then(|t| t.strip_suffix(')')) {
            let s = self
                .sorts
                .iter()
                .position(|x| x.name.as_str() == inner.trim())
                .ok_or_else(|| ProverError::UnknownSort(Name::new(inner.trim())))?;
            return Ok(Word::identity(s as u32));
        }
        let mut syms = Vec::new();
        for part in text.split('.') {
            let part = part.trim();
            let f = self.funs.iter().position(|x| x.name.as_str() == part).ok_or_else(|| ProverError::UnknownSymbol(Name::new(part)))?;
            syms.push(f as u32);
        }
        let w = self.typed(syms, 0);
        if !self.is_well_typed(&w) {
            return Err(ProverError::IllTyped(text.to_string()));
        }
        Ok(w)
    }
}
