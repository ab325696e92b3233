use std::collections::{BTreeMap, HashMap};

use crate::syntax::Name;

use super::tables::{CrossElement, ProfunctorTable};
use super::{Rep, SemanticsError};

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// The coend table and, for each of its classes, the pairs `(x, y)` of
/// element indices of the two inputs that fall into it.
pub(crate) struct CoendModel {
    pub table: ProfunctorTable,
    pub members: Vec<Vec<(usize, usize)>>,
}

pub(crate) fn coend_model(tp: &ProfunctorTable, tq: &ProfunctorTable) -> Result<CoendModel, SemanticsError> {
    if !tp.right().same_shape(tq.left()) {
        return Err(SemanticsError::MiddleMismatch(format!("{} does not end where {} starts", tp.name(), tq.name())));
    }
    let (xs, ys) = (tp.elements(), tq.elements());
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for (x, xe) in xs.iter().enumerate() {
        for (y, _) in ys.iter().enumerate().filter(|(_, ye)| ye.src == xe.tgt) {
            index.insert((x, y), pairs.len());
            pairs.push((x, y));
        }
    }
    let mut uf = UnionFind((0..pairs.len()).collect());
    let mid = tp.right();
    for (g, ge) in mid.elements().iter().enumerate() {
        for (x, _) in xs.iter().enumerate().filter(|(_, xe)| xe.tgt == ge.src) {
            let Some(xg) = tp.right_action(x, g) else { continue };
            for (y, _) in ys.iter().enumerate().filter(|(_, ye)| ye.src == ge.tgt) {
                let Some(gy) = tq.left_action(g, y) else { continue };
                uf.union(index[&(xg, y)], index[&(x, gy)]);
            }
        }
    }
    let mut class_of_root: HashMap<usize, usize> = HashMap::new();
    let mut members: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut class_of_pair = vec![0; pairs.len()];
    for (i, &pair) in pairs.iter().enumerate() {
        let root = uf.find(i);
        let k = *class_of_root.entry(root).or_insert_with(|| {
            members.push(Vec::new());
            members.len() - 1
        });
        members[k].push(pair);
        class_of_pair[i] = k;
    }
    let elements: Vec<CrossElement> = members
        .iter()
        .map(|m| {
            let (x, y) = m[0];
            CrossElement { src: xs[x].src, tgt: ys[y].tgt, rep: Rep::Pair(Box::new(xs[x].rep.clone()), Box::new(ys[y].rep.clone())) }
        })
        .collect();
    let mut left_act = BTreeMap::new();
    let mut right_act = BTreeMap::new();
    for (k, m) in members.iter().enumerate() {
        let e = &elements[k];
        for (u, _) in tp.left().elements().iter().enumerate().filter(|(_, ue)| ue.tgt == e.src) {
            let moved = m.iter().find_map(|&(x, y)| tp.left_action(u, x).map(|x2| index[&(x2, y)]));
            if let Some(i) = moved {
                left_act.insert((u, k), class_of_pair[i]);
            }
        }
        for (h, _) in tq.right().elements().iter().enumerate().filter(|(_, he)| he.src == e.tgt) {
            let moved = m.iter().find_map(|&(x, y)| tq.right_action(y, h).map(|y2| index[&(x, y2)]));
            if let Some(i) = moved {
                right_act.insert((k, h), class_of_pair[i]);
            }
        }
    }
    let table = ProfunctorTable::from_parts(
        Name::new(format!("{}⊙{}", tp.name(), tq.name())),
        tp.left().clone(),
        tq.right().clone(),
        elements,
        left_act,
        right_act,
        tp.depth().min(tq.depth()),
        // Relations by generating symbols suffice once depth reaches 1.
        tp.stabilized() && tq.stabilized() && (mid.stabilized() || tp.depth().min(tq.depth()) >= 1),
    );
    Ok(CoendModel { table, members })
}

/// `(P ⊙ Q)(c, e)`: pairs over a shared middle object modulo
/// `(x·g, y) ~ (x, g·y)` for every middle class `g` in the tables. Exact
/// when both inputs are stabilized.
pub fn coend_compose(tp: &ProfunctorTable, tq: &ProfunctorTable) -> Result<ProfunctorTable, SemanticsError> {
    Ok(coend_model(tp, tq)?.table)
}
