use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CircuitSpec, DecoyConfig, GateKind, NativeGate};

/// Interleaves random decoy gates into a circuit.
///
/// Decoy ions are numbered `n_ions..n_ions + n_decoys`. The number of decoys
/// is `round(gate_rate · n_gates)`; their kinds, angles and levels are drawn
/// from the mix found in the circuit itself so they look like ordinary
/// work. Computational gates keep their relative order.
pub fn apply_decoys(circuit: &CircuitSpec, decoy: &DecoyConfig, seed: u64) -> CircuitSpec {
    let n = circuit.gates.len();
    let m = libm::round(decoy.gate_rate.max(0.0) * n as f64) as usize;
    let mut out = CircuitSpec {
        n_ions: circuit.n_ions + decoy.n_decoys,
        gates: Vec::with_capacity(n + m),
        n_shots: circuit.n_shots,
    };
    if m == 0 || decoy.n_decoys == 0 {
        out.gates.extend(circuit.gates.iter().cloned());
        return out;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_ms = circuit.gates.iter().filter(|g| g.kind == GateKind::Ms).count();
    let n_ry = circuit.gates.iter().filter(|g| g.kind == GateKind::Ry).count();
    let n_single = n - n_ms;
    let thetas: Vec<f64> = circuit.gates.iter().filter(|g| g.kind != GateKind::Ms).map(|g| g.theta_rad).collect();
    let top_level = circuit.gates.iter().map(|g| g.level_j).max().unwrap_or(1).max(1);

    let draw = |rng: &mut ChaCha8Rng| -> NativeGate {
        let first = circuit.n_ions + rng.random_range(0..decoy.n_decoys);
        let want_ms = rng.random_range(0..n) < n_ms;
        let mut gate = if want_ms && decoy.n_decoys >= 2 {
            let mut second = circuit.n_ions + rng.random_range(0..decoy.n_decoys - 1);
            if second >= first {
                second += 1;
            }
            NativeGate::ms(first, second)
        } else {
            let theta = if thetas.is_empty() { PI } else { thetas[rng.random_range(0..thetas.len())] };
            let ry = if n_single == 0 { rng.random::<bool>() } else { rng.random_range(0..n_single) < n_ry };
            if ry {
                NativeGate::ry(first, theta)
            } else {
                NativeGate::rx(first, theta)
            }
        };
        let i = rng.random_range(0..top_level);
        let j = rng.random_range(i + 1..=top_level);
        gate = gate.with_levels(i, j);
        gate.decoy = true;
        gate
    };

    let mut is_decoy = alloc::vec![false; n + m];
    for pos in index::sample(&mut rng, n + m, m) {
        is_decoy[pos] = true;
    }
    let mut computational = circuit.gates.iter();
    for slot in is_decoy {
        if slot {
            out.gates.push(draw(&mut rng));
        } else {
            out.gates.push(computational.next().expect("slot count matches").clone());
        }
    }
    out
}
