use std::collections::HashMap;

use num_bigint::BigUint;

use super::matrix::FiniteMatrix;

/// Stabilizer chain for a matrix group over `F_l` acting on the right on
/// nonzero row vectors. Points are encoded as `sum v_m l^m`.
#[derive(Debug, Clone)]
pub struct StabChain {
    modulus: u64,
    dim: usize,
    base: Vec<usize>,
    strong: Vec<FiniteMatrix>,
    levels: Vec<Level>,
}

#[derive(Debug, Clone)]
struct Level {
    orbit: Vec<usize>,
    // point -> (u, u^-1) with base^u = point
    transversal: HashMap<usize, (FiniteMatrix, FiniteMatrix)>,
}

fn encode(v: &[u64], l: u64) -> usize {
    v.iter().rev().fold(0usize, |acc, &x| acc * l as usize + x as usize)
}

fn decode(mut pt: usize, l: u64, dim: usize) -> Vec<u64> {
    (0..dim)
        .map(|_| {
            let x = (pt % l as usize) as u64;
            pt /= l as usize;
            x
        })
        .collect()
}

fn act(pt: usize, m: &FiniteMatrix) -> usize {
    let (l, n) = (m.modulus(), m.dim());
    let v = decode(pt, l, n);
    let w: Vec<u64> = (0..n)
        .map(|c| (0..n).fold(0u64, |acc, r| (acc + v[r] * m.get(r, c)) % l))
        .collect();
    encode(&w, l)
}

fn unit_vector(m: usize, l: u64, dim: usize) -> usize {
    let mut v = vec![0; dim];
    v[m] = 1;
    encode(&v, l)
}

impl StabChain {
    /// Deterministic Schreier-Sims with restarts (Holt's formulation).
    pub fn build(gens: &[FiniteMatrix], l: u64) -> Self {
        let dim = gens.first().map_or(1, FiniteMatrix::dim);
        for g in gens {
            assert_eq!(g.modulus(), l, "generator modulus must be l");
            assert_eq!(g.dim(), dim, "generators must share a dimension");
        }
        let mut chain = StabChain { modulus: l, dim, base: Vec::new(), strong: Vec::new(), levels: Vec::new() };
        for g in gens {
            if !g.is_identity() && !chain.strong.contains(g) {
                chain.strong.push(g.clone());
            }
        }
        let strong = chain.strong.clone();
        for g in &strong {
            if chain.base.iter().all(|&b| act(b, g) == b) {
                chain.base.push(chain.moved_point(g));
            }
        }
        chain.rebuild_levels();

        let mut i = chain.base.len() as isize - 1;
        while i >= 0 {
            match chain.check_level(i as usize) {
                Some(j) => i = j as isize,
                None => i -= 1,
            }
        }
        chain
    }

    fn moved_point(&self, g: &FiniteMatrix) -> usize {
        (0..self.dim)
            .map(|m| unit_vector(m, self.modulus, self.dim))
            .find(|&e| act(e, g) != e)
            .expect("non-identity matrix moves a standard vector")
    }

    fn level_gens(&self, i: usize) -> Vec<&FiniteMatrix> {
        self.strong
            .iter()
            .filter(|g| self.base[..i].iter().all(|&b| act(b, g) == b))
            .collect()
    }

    fn rebuild_levels(&mut self) {
        let id = FiniteMatrix::identity(self.modulus, self.dim);
        let mut levels = Vec::with_capacity(self.base.len());
        for i in 0..self.base.len() {
            let gens: Vec<(FiniteMatrix, FiniteMatrix)> = self
                .level_gens(i)
                .into_iter()
                .map(|g| (g.clone(), g.inverse().expect("invertible generator")))
                .collect();
            let b = self.base[i];
            let mut orbit = vec![b];
            let mut transversal = HashMap::new();
            transversal.insert(b, (id.clone(), id.clone()));
            let mut k = 0;
            while k < orbit.len() {
                let pt = orbit[k];
                for (g, gi) in &gens {
                    let img = act(pt, g);
                    if !transversal.contains_key(&img) {
                        let (u, ui) = &transversal[&pt];
                        let entry = (u.mul(g), gi.mul(ui));
                        transversal.insert(img, entry);
                        orbit.push(img);
                    }
                }
                k += 1;
            }
            levels.push(Level { orbit, transversal });
        }
        self.levels = levels;
    }

    /// Sift from level `start`; returns the residue and the level it stopped at.
    fn sift(&self, mut g: FiniteMatrix, start: usize) -> (FiniteMatrix, usize) {
        for m in start..self.base.len() {
            let beta = act(self.base[m], &g);
            match self.levels[m].transversal.get(&beta) {
                Some((_, ui)) => g = g.mul(ui),
                None => return (g, m),
            }
        }
        (g, self.base.len())
    }

    /// Checks all Schreier generators at level `i`; on failure adds a
    /// strong generator and returns the level to restart from.
    fn check_level(&mut self, i: usize) -> Option<usize> {
        let gens: Vec<FiniteMatrix> = self.level_gens(i).into_iter().cloned().collect();
        let orbit = self.levels[i].orbit.clone();
        for delta in orbit {
            for s in &gens {
                let (u, _) = &self.levels[i].transversal[&delta];
                let (_, vi) = &self.levels[i].transversal[&act(delta, s)];
                let y = u.mul(s).mul(vi);
                let (h, j) = self.sift(y, i + 1);
                if !h.is_identity() {
                    if j == self.base.len() {
                        let pt = self.moved_point(&h);
                        self.base.push(pt);
                    }
                    self.strong.push(h);
                    self.rebuild_levels();
                    return Some(j);
                }
            }
        }
        None
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, lv| acc * lv.orbit.len())
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|lv| lv.orbit.len()).collect()
    }

    pub fn base_points(&self) -> Vec<Vec<u64>> {
        self.base.iter().map(|&b| decode(b, self.modulus, self.dim)).collect()
    }

    pub fn strong_generators(&self) -> &[FiniteMatrix] {
        &self.strong
    }

    pub fn contains(&self, g: &FiniteMatrix) -> bool {
        let (h, j) = self.sift(g.clone(), 0);
        j == self.base.len() && h.is_identity()
    }

    /// Re-checks the chain invariants: every strong generator sifts, and
    /// every transversal entry maps its base point where it claims.
    pub fn verify(&self) -> bool {
        let transversals_ok = self.levels.iter().zip(&self.base).all(|(lv, &b)| {
            lv.orbit.len() == lv.transversal.len()
                && lv.transversal.iter().all(|(&pt, (u, ui))| act(b, u) == pt && u.mul(ui).is_identity())
        });
        transversals_ok && self.strong.iter().all(|g| self.contains(g))
    }
}

/// Order of the group generated by `gens` over `F_l`, with its chain.
pub fn stab_chain_order(gens: &[FiniteMatrix], l: u64) -> (BigUint, StabChain) {
    let chain = StabChain::build(gens, l);
    (chain.order(), chain)
}
