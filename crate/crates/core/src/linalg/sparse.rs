//! Kernel of a large sparse matrix over `Z/p^m`.
//!
//! Rows are fed one at a time. A row that still has a unit entry after
//! reduction becomes a pivot row and stays fully reduced against the others;
//! rows without a unit are set aside and handled at the end by a dense Smith
//! computation restricted to the non-pivot columns, which is small when the
//! kernel is small.

use super::{kernel, Matrix, Zpm};

type SparseRow = Vec<(usize, u64)>;

pub struct SparseKernel {
    ring: Zpm,
    ncols: usize,
    /// Column index to pivot-row index.
    pivot_of: Vec<Option<usize>>,
    /// Pivot rows as (pivot column, tail on non-pivot columns).
    pivots: Vec<(usize, SparseRow)>,
    /// Column index to pivot rows whose tail may mention it.
    occurs: Vec<Vec<usize>>,
    deferred: Vec<SparseRow>,
    scratch: Vec<u64>,
    touched: Vec<usize>,
}

impl SparseKernel {
    pub fn new(ncols: usize, ring: Zpm) -> Self {
        Self {
            ring,
            ncols,
            pivot_of: vec![None; ncols],
            pivots: Vec::new(),
            occurs: vec![Vec::new(); ncols],
            deferred: Vec::new(),
            scratch: vec![0; ncols],
            touched: Vec::new(),
        }
    }

    pub fn rank_of_unit_part(&self) -> usize {
        self.pivots.len()
    }

    fn bump(&mut self, c: usize, v: u64) {
        if v == 0 {
            return;
        }
        if self.scratch[c] == 0 {
            self.touched.push(c);
        }
        self.scratch[c] = self.ring.add(self.scratch[c], v);
    }

    /// Expresses a row on the current non-pivot columns.
    fn reduce(&mut self, entries: &[(usize, u64)]) -> SparseRow {
        let r = self.ring;
        for &(c, v) in entries {
            let v = v % r.modulus();
            if v == 0 {
                continue;
            }
            match self.pivot_of[c] {
                None => self.bump(c, v),
                Some(pi) => {
                    let tail = std::mem::take(&mut self.pivots[pi].1);
                    for &(j, w) in &tail {
                        self.bump(j, r.neg(r.mul(v, w)));
                    }
                    self.pivots[pi].1 = tail;
                }
            }
        }
        let mut out: SparseRow = Vec::with_capacity(self.touched.len());
        for &c in &self.touched {
            if self.scratch[c] != 0 {
                out.push((c, self.scratch[c]));
                self.scratch[c] = 0;
            }
        }
        self.touched.clear();
        out.sort_unstable_by_key(|e| e.0);
        out
    }

    pub fn add_row(&mut self, entries: &[(usize, u64)]) {
        let row = self.reduce(entries);
        self.absorb(row);
    }

    /// Takes a reduced row and installs it as a pivot or defers it.
    fn absorb(&mut self, row: SparseRow) {
        if row.is_empty() {
            return;
        }
        let r = self.ring;
        let Some(&(c, u)) = row.iter().find(|e| r.is_unit(e.1)) else {
            self.deferred.push(row);
            return;
        };
        let uinv = r.inv(u).expect("unit");
        let tail: SparseRow = row
            .iter()
            .filter(|e| e.0 != c)
            .map(|&(j, w)| (j, r.mul(w, uinv)))
            .collect();
        // clear column c from every pivot row mentioning it
        let users = std::mem::take(&mut self.occurs[c]);
        for pi in users {
            let old = &self.pivots[pi].1;
            let Ok(pos) = old.binary_search_by_key(&c, |e| e.0) else {
                continue;
            };
            let f = old[pos].1;
            let merged = merge_sub(old, pos, f, &tail, &r);
            for &(j, _) in &tail {
                self.occurs[j].push(pi);
            }
            self.pivots[pi].1 = merged;
        }
        let idx = self.pivots.len();
        for &(j, _) in &tail {
            self.occurs[j].push(idx);
        }
        self.pivot_of[c] = Some(idx);
        self.pivots.push((c, tail));
        if self.deferred.len() > 2 * self.free_count() + 64 {
            self.compress();
        }
    }

    fn free_count(&self) -> usize {
        self.ncols - self.pivots.len()
    }

    fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols)
            .filter(|&c| self.pivot_of[c].is_none())
            .collect()
    }

    /// Re-reduces deferred rows and replaces them by an echelon basis of
    /// their span on the free columns.
    fn compress(&mut self) {
        loop {
            let pending = std::mem::take(&mut self.deferred);
            let before = self.pivots.len();
            for row in pending {
                let reduced = self.reduce(&row);
                self.absorb_no_compress(reduced);
            }
            if self.pivots.len() == before {
                break;
            }
        }
        let free = self.free_columns();
        let mut pos = vec![usize::MAX; self.ncols];
        for (k, &c) in free.iter().enumerate() {
            pos[c] = k;
        }
        let mut dense: Vec<Vec<u64>> = self
            .deferred
            .iter()
            .map(|row| {
                let mut d = vec![0; free.len()];
                for &(c, v) in row {
                    d[pos[c]] = v;
                }
                d
            })
            .collect();
        echelon(&mut dense, &self.ring);
        self.deferred = dense
            .into_iter()
            .map(|d| {
                d.iter()
                    .enumerate()
                    .filter(|e| *e.1 != 0)
                    .map(|(k, &v)| (free[k], v))
                    .collect()
            })
            .collect();
    }

    fn absorb_no_compress(&mut self, row: SparseRow) {
        let saved = std::mem::take(&mut self.deferred);
        self.absorb(row);
        let mut extra = std::mem::replace(&mut self.deferred, saved);
        self.deferred.append(&mut extra);
    }

    /// Generators of the kernel, as dense vectors of length `ncols`.
    pub fn finish(mut self) -> Vec<Vec<u64>> {
        self.compress();
        let r = self.ring;
        let free = self.free_columns();
        let mut pos = vec![usize::MAX; self.ncols];
        for (k, &c) in free.iter().enumerate() {
            pos[c] = k;
        }
        let rows: Vec<Vec<u64>> = self
            .deferred
            .iter()
            .map(|row| {
                let mut d = vec![0; free.len()];
                for &(c, v) in row {
                    d[pos[c]] = v;
                }
                d
            })
            .collect();
        let gens_free: Vec<Vec<u64>> = if rows.is_empty() {
            (0..free.len())
                .map(|k| {
                    let mut e = vec![0; free.len()];
                    e[k] = 1;
                    e
                })
                .collect()
        } else {
            let k = kernel(&Matrix::from_rows(&rows, free.len()), &r);
            (0..k.cols()).map(|j| k.col(j)).collect()
        };
        gens_free
            .into_iter()
            .map(|xf| {
                let mut x = vec![0u64; self.ncols];
                for (k, &c) in free.iter().enumerate() {
                    x[c] = xf[k];
                }
                for (c, tail) in &self.pivots {
                    // pivot row: x_c + Σ w_j x_j = 0
                    let s = tail
                        .iter()
                        .fold(0, |acc, &(j, w)| r.add(acc, r.mul(w, x[j])));
                    x[*c] = r.neg(s);
                }
                x
            })
            .filter(|x| x.iter().any(|&v| v != 0))
            .collect()
    }
}

/// `old − f·(e_c + tail)` with the `c` entry (at `pos`) removed.
fn merge_sub(old: &SparseRow, pos: usize, f: u64, tail: &SparseRow, r: &Zpm) -> SparseRow {
    let mut out = Vec::with_capacity(old.len() + tail.len());
    let (mut i, mut j) = (0, 0);
    while i < old.len() || j < tail.len() {
        if i == pos {
            i += 1;
            continue;
        }
        let take_old = j >= tail.len() || (i < old.len() && old[i].0 < tail[j].0);
        let take_tail = i >= old.len() || (j < tail.len() && tail[j].0 < old[i].0);
        if take_old {
            out.push(old[i]);
            i += 1;
        } else if take_tail {
            let v = r.neg(r.mul(f, tail[j].1));
            if v != 0 {
                out.push((tail[j].0, v));
            }
            j += 1;
        } else {
            let v = r.sub(old[i].1, r.mul(f, tail[j].1));
            if v != 0 {
                out.push((old[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form by elementary row operations only (the row span is
/// preserved); zero rows are dropped.
fn echelon(rows: &mut Vec<Vec<u64>>, r: &Zpm) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut t = 0;
    for c in 0..ncols {
        if t == rows.len() {
            break;
        }
        let best = (t..rows.len())
            .filter(|&i| rows[i][c] != 0)
            .min_by_key(|&i| r.valuation(rows[i][c]));
        let Some(b) = best else { continue };
        rows.swap(t, b);
        let piv = rows[t][c];
        let k = r.valuation(piv);
        let pk = r.p().pow(k);
        let uinv = r.inv(piv / pk).expect("unit part");
        for i in t + 1..rows.len() {
            let x = rows[i][c];
            if x == 0 {
                continue;
            }
            let f = r.mul(x / pk, uinv);
            let (head, rest) = rows.split_at_mut(i);
            let src = &head[t];
            for (d, &s) in rest[0].iter_mut().zip(src) {
                *d = r.sub(*d, r.mul(f, s));
            }
        }
        t += 1;
    }
    rows.truncate(t);
    rows.retain(|row| row.iter().any(|&x| x != 0));
}
