//! Generators for finite systems used by the verification suites.

use rand::seq::SliceRandom;
use rand::Rng;
use solyanik_core::ergodic::FiniteSystem;
use solyanik_core::rational::ratio;
use solyanik_core::Rational;

use crate::error::Result;

/// Integer partitions of `k` in nonincreasing part order.
pub fn partitions(k: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// One permutation with the given cycle lengths, cycles on consecutive atoms.
/// `cycle_weights[c]` is the unnormalized weight of each atom of cycle `c`.
pub fn cycle_system(cycles: &[usize], cycle_weights: Option<&[u64]>) -> Result<FiniteSystem> {
    let size: usize = cycles.iter().sum();
    let mut map = vec![0; size];
    let mut weights = Vec::with_capacity(size);
    let total: u64 = match cycle_weights {
        Some(w) => cycles.iter().zip(w).map(|(&len, &w)| len as u64 * w).sum(),
        None => size as u64,
    };
    let mut start = 0;
    for (c, &len) in cycles.iter().enumerate() {
        let w = cycle_weights.map_or(1, |w| w[c]);
        for i in 0..len {
            map[start + i] = start + (i + 1) % len;
            weights.push(ratio(w, total));
        }
        start += len;
    }
    Ok(FiniteSystem::new(weights, vec![map])?)
}

/// Every cycle type on at most `max_atoms` atoms with uniform weights.
pub fn all_cycle_types(max_atoms: usize) -> Result<Vec<FiniteSystem>> {
    (1..=max_atoms).flat_map(partitions).map(|p| cycle_system(&p, None)).collect()
}

/// Cycle types with random weights constant on each cycle.
pub fn weighted_cycle_types(max_atoms: usize, per_size: usize, rng: &mut impl Rng) -> Result<Vec<FiniteSystem>> {
    let mut out = Vec::new();
    for k in 1..=max_atoms {
        let parts = partitions(k);
        for _ in 0..per_size {
            let p = parts.choose(rng).expect("k >= 1");
            let w: Vec<u64> = p.iter().map(|_| rng.gen_range(1..=5)).collect();
            out.push(cycle_system(p, Some(&w))?);
        }
    }
    Ok(out)
}

/// Powers `U^a`, `V^b` of the shifts on `Z_x x Z_y`, relabelled by `perm`.
pub fn relabelled_pair(x: usize, y: usize, a: usize, b: usize, perm: &[usize]) -> Result<FiniteSystem> {
    let base = FiniteSystem::product_cyclic(&[x, y])?;
    let size = x * y;
    let maps = [(0, a), (1, b)]
        .iter()
        .map(|&(axis, power)| {
            let map = &base.maps()[axis];
            let mut out = vec![0; size];
            for atom in 0..size {
                let image = (0..power).fold(atom, |p, _| map[p]);
                out[perm[atom]] = perm[image];
            }
            out
        })
        .collect();
    Ok(FiniteSystem::new(base.weights().to_vec(), maps)?)
}

/// A random commuting pair on `min_atoms..=max_atoms` atoms, built from a
/// relabelled product with random powers.
pub fn random_commuting_pair(min_atoms: usize, max_atoms: usize, rng: &mut impl Rng) -> Result<FiniteSystem> {
    loop {
        let x = rng.gen_range(1..=max_atoms);
        let y = rng.gen_range(1..=max_atoms);
        if x * y > max_atoms || x * y < min_atoms {
            continue;
        }
        let mut perm: Vec<usize> = (0..x * y).collect();
        perm.shuffle(rng);
        return relabelled_pair(x, y, rng.gen_range(1..=x), rng.gen_range(1..=y), &perm);
    }
}

/// Two-dimensional system whose weights differ between two invariant halves.
pub fn two_block_pair(x: usize, y: usize, heavy: u64) -> Result<FiniteSystem> {
    let base = FiniteSystem::product_cyclic(&[x, y])?;
    let size = x * y;
    let total = size as u64 * (1 + heavy);
    let mut weights: Vec<Rational> = vec![ratio(1, total); size];
    weights.extend(vec![ratio(heavy, total); size]);
    let maps = base
        .maps()
        .iter()
        .map(|m| m.iter().copied().chain(m.iter().map(|&v| v + size)).collect())
        .collect();
    Ok(FiniteSystem::new(weights, maps)?)
}
