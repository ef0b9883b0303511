//! Property tests for the engine primitives.

use parrondo_core::engine::{ControlSpec, RegisterLayout, StateVector};
use parrondo_core::gate::{compose_gate, GateParams};
use parrondo_core::quantum::{mod3_op, QuantumGameConfig};
use proptest::prelude::*;

fn arb_params() -> impl Strategy<Value = GateParams> {
    (
        -6.3..6.3f64,
        -6.3..6.3f64,
        -6.3..6.3f64,
        -6.3..6.3f64,
    )
        .prop_map(|(delta, alpha, beta, theta)| GateParams {
            delta,
            alpha,
            beta,
            theta,
        })
}

proptest! {
    #[test]
    fn composed_gate_is_always_unitary(params in arb_params()) {
        let gate = compose_gate(&params).unwrap();
        prop_assert!(gate.is_unitary(1e-10));
    }

    #[test]
    fn add_then_subtract_is_identity(seed in 0u64..1_000, coin_control in any::<bool>()) {
        let layout = RegisterLayout::new(3).unwrap();
        let mut state = StateVector::random_normalized(layout.total_qubits(), seed);
        let before = state.clone();
        let controls = if coin_control {
            ControlSpec::positive(layout.coin_qubit())
        } else {
            ControlSpec::none()
        };
        state.add_to_register(layout.capital_range(), 1, &controls).unwrap();
        state.add_to_register(layout.capital_range(), -1, &controls).unwrap();
        prop_assert_eq!(state, before);
    }

    #[test]
    fn mod3_round_trip_is_identity(seed in 0u64..1_000, n in 2usize..6) {
        let layout = RegisterLayout::new(n).unwrap();
        let mut state = StateVector::random_normalized(layout.total_qubits(), seed);
        let before = state.clone();
        state.apply_op(&mod3_op(&layout, false)).unwrap();
        state.apply_op(&mod3_op(&layout, true)).unwrap();
        prop_assert_eq!(state, before);
    }

    #[test]
    fn controlled_on_satisfied_subspace_matches_unconditional(
        params in arb_params(),
        seed in 0u64..1_000,
    ) {
        // prepare a state entirely inside the control-satisfied subspace
        // (ancilla o3 = 1); a controlled gate must then act like the plain one
        let layout = RegisterLayout::new(2).unwrap();
        let m = layout.total_qubits();
        let o3 = layout.ancilla_qubits()[2];
        let raw = StateVector::random_normalized(m - 1, seed);
        let mut amps = vec![num_complex::Complex64::new(0.0, 0.0); 1 << m];
        let o3_bit = 1usize << o3;
        let below = o3_bit - 1;
        for (i, &amp) in raw.amplitudes().iter().enumerate() {
            let spread = (i & below) | ((i & !below) << 1);
            amps[spread | o3_bit] = amp;
        }
        let state = StateVector::from_amplitudes(amps);

        let gate = compose_gate(&params).unwrap();
        let mut controlled = state.clone();
        controlled
            .apply_controlled(&gate, layout.coin_qubit(), &ControlSpec::positive(o3))
            .unwrap();
        let mut unconditional = state.clone();
        unconditional
            .apply_single_qubit(&gate, layout.coin_qubit())
            .unwrap();

        prop_assert!(controlled.max_amplitude_diff(&unconditional) < 1e-14);
    }

    #[test]
    fn negative_and_positive_controls_partition_the_state(
        params in arb_params(),
        seed in 0u64..1_000,
    ) {
        // applying G on the o3=1 subspace and G on the o3=0 subspace is the
        // same as applying G unconditionally
        let layout = RegisterLayout::new(2).unwrap();
        let o3 = layout.ancilla_qubits()[2];
        let state = StateVector::random_normalized(layout.total_qubits(), seed);
        let gate = compose_gate(&params).unwrap();

        let mut split = state.clone();
        split
            .apply_controlled(&gate, layout.coin_qubit(), &ControlSpec::positive(o3))
            .unwrap();
        split
            .apply_controlled(&gate, layout.coin_qubit(), &ControlSpec::negative(o3))
            .unwrap();

        let mut whole = state.clone();
        whole.apply_single_qubit(&gate, layout.coin_qubit()).unwrap();

        prop_assert!(split.max_amplitude_diff(&whole) < 1e-14);
    }

    #[test]
    fn games_preserve_norm_and_ancilla(
        params_a in arb_params(),
        params_b1 in arb_params(),
        params_b2 in arb_params(),
        offset in -3i64..4,
    ) {
        let mut config = QuantumGameConfig::table1(4, offset).unwrap();
        config.params_a = params_a;
        config.params_b1 = params_b1;
        config.params_b2 = params_b2;
        let layout = config.layout();
        let mut state = parrondo_core::engine::init_state(&layout, offset).unwrap();
        for _ in 0..3 {
            parrondo_core::quantum::game_a(&mut state, &layout, &config).unwrap();
            parrondo_core::quantum::game_b(&mut state, &layout, &config).unwrap();
        }
        prop_assert!((state.norm() - 1.0).abs() < 1e-12);
        prop_assert!(parrondo_core::quantum::ancilla_leakage(&state, &layout) < 1e-12);
    }
}
