use proptest::prelude::*;

use ldc3::format::{read_sldc, write_sldc};
use ldc3::generators::{hadamard_strong_ldc, random_colored_hypergraph, GenConfig};
use ldc3::gf2::check_condition_ii;
use ldc3::signature::{build_signature_graph, exact_edge_count};
use ldc3::witness::{
    find_violation, grow_rainbow_tree, validate_certificate, FindOutcome, WitnessConfig,
};
use ldc3::Rational;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certificates_are_sound(
        n in 9usize..40,
        k in 2usize..10,
        per_color in 1u64..4,
        seed in any::<u64>(),
        threshold in proptest::option::of(1usize..4),
    ) {
        prop_assume!(3 * per_color as usize <= n);
        let h = random_colored_hypergraph(n, k, Rational::new(per_color, n as u64), &GenConfig::with_seed(seed));
        let Ok(h) = h else { return Ok(()) };
        let cfg = WitnessConfig { degree_threshold: threshold, root_attempts: 8, seed, ..WitnessConfig::default() };
        let holds = check_condition_ii(&h).holds;
        match find_violation(&h, &cfg).unwrap() {
            FindOutcome::Found(cert) => {
                prop_assert!(!holds);
                prop_assert!(validate_certificate(&h, &cert).unwrap());
            }
            FindOutcome::NotFound { roots_tried, .. } => prop_assert!(roots_tried <= 8),
        }
    }

    #[test]
    fn trees_are_rainbow_with_bounded_depth(k in 4usize..8, seed in any::<u64>(), root in any::<prop::sample::Index>()) {
        let inst = hadamard_strong_ldc(k, &GenConfig::with_seed(seed)).unwrap();
        let h = ldc3::ldc::recovery_hypergraph(&inst).unwrap();
        let g = build_signature_graph(&h).unwrap();
        prop_assert_eq!(g.num_edges() as u64, exact_edge_count(&h));
        let r = g.vertex(root.index(g.num_vertices()));
        let (tree, _) = grow_rainbow_tree(&g, r, &WitnessConfig::default());
        prop_assert!(tree.is_rainbow());
        let bound = (usize::BITS - g.num_vertices().leading_zeros()) as usize + 2;
        prop_assert!(tree.depth() <= bound);
    }

    #[test]
    fn sldc_round_trip(k in 3usize..8, seed in any::<u64>()) {
        let inst = hadamard_strong_ldc(k, &GenConfig::with_seed(seed)).unwrap();
        let text = write_sldc(&inst);
        let back = read_sldc(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_sldc(&back), text);
    }
}
