macro_rules! example_test {
    ($module:ident, $file:literal, $test:ident) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $test() {
            $module::run_example().expect(concat!($file, " should run"));
        }
    };
}

example_test!(equivalent_measure, "equivalent_measure.rs", equivalent_measure_runs);
example_test!(power_sequence, "power_sequence.rs", power_sequence_runs);
example_test!(typewriter, "typewriter.rs", typewriter_runs);
example_test!(random_walk, "random_walk.rs", random_walk_runs);
example_test!(fourier_partial_sums, "fourier_partial_sums.rs", fourier_partial_sums_runs);
example_test!(grand_lebesgue, "grand_lebesgue.rs", grand_lebesgue_runs);
example_test!(trial_classes, "trial_classes.rs", trial_classes_runs);
example_test!(corpus_tour, "corpus_tour.rs", corpus_tour_runs);
