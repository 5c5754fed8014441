//! Two-pass 8-connected component labeling with a union-find forest.

use alloc::vec;
use alloc::vec::Vec;

use super::DetectionMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub time: usize,
    pub freq: usize,
}

/// A maximal 8-connected set of mask cells, sorted by `(time, freq)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    cells: Vec<Cell>,
}

impl Component {
    pub fn new(mut cells: Vec<Cell>) -> Self {
        cells.sort_unstable();
        Self { cells }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn min_time(&self) -> usize {
        self.cells.first().map_or(0, |c| c.time)
    }

    pub fn max_time(&self) -> usize {
        self.cells.last().map_or(0, |c| c.time)
    }

    pub fn min_freq(&self) -> usize {
        self.cells.iter().map(|c| c.freq).min().unwrap_or(0)
    }

    pub fn max_freq(&self) -> usize {
        self.cells.iter().map(|c| c.freq).max().unwrap_or(0)
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn make(&mut self) -> u32 {
        let id = self.parent.len() as u32;
        self.parent.push(id);
        id
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) -> u32 {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        lo
    }
}

const NONE: u32 = u32::MAX;

/// Partitions the set bits of `mask` into 8-connected components.
///
/// Components are ordered by minimum time index, then minimum frequency
/// index, then first cell in raster order.
pub fn label_components(mask: &DetectionMask) -> Vec<Component> {
    let (nf, nt) = (mask.n_freq(), mask.n_time());
    let mut labels = vec![NONE; nf * nt];
    let mut uf = UnionFind { parent: Vec::new() };

    for t in 0..nt {
        for f in 0..nf {
            if !mask.get(f, t) {
                continue;
            }
            // already-visited neighbours in (t, f) raster order
            let mut label = NONE;
            let visit = |l: u32, label: &mut u32, uf: &mut UnionFind| {
                if l == NONE {
                    return;
                }
                *label = if *label == NONE { uf.find(l) } else { uf.union(*label, l) };
            };
            if f > 0 {
                visit(labels[t * nf + f - 1], &mut label, &mut uf);
            }
            if t > 0 {
                let prev = (t - 1) * nf;
                if f > 0 {
                    visit(labels[prev + f - 1], &mut label, &mut uf);
                }
                visit(labels[prev + f], &mut label, &mut uf);
                if f + 1 < nf {
                    visit(labels[prev + f + 1], &mut label, &mut uf);
                }
            }
            if label == NONE {
                label = uf.make();
            }
            labels[t * nf + f] = label;
        }
    }

    // Roots in order of their first raster cell.
    let mut slot = vec![NONE; uf.parent.len()];
    let mut groups: Vec<Vec<Cell>> = Vec::new();
    for t in 0..nt {
        for f in 0..nf {
            let l = labels[t * nf + f];
            if l == NONE {
                continue;
            }
            let root = uf.find(l) as usize;
            if slot[root] == NONE {
                slot[root] = groups.len() as u32;
                groups.push(Vec::new());
            }
            groups[slot[root] as usize].push(Cell { time: t, freq: f });
        }
    }

    let mut components: Vec<Component> = groups.into_iter().map(Component::new).collect();
    // stable: raster order breaks remaining ties
    components.sort_by_key(|c| (c.min_time(), c.min_freq()));
    components
}
