//! Every runnable example, executed as a test.

mod backends {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/backends.rs"));
}

#[test]
fn backends_runs() {
    backends::main();
}

mod blowup_verdicts {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/blowup_verdicts.rs"));
}

#[test]
fn blowup_verdicts_runs() {
    blowup_verdicts::main();
}

mod cascade {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cascade.rs"));
}

#[test]
fn cascade_runs() {
    cascade::main();
}

mod enclosures {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/enclosures.rs"));
}

#[test]
fn enclosures_runs() {
    enclosures::main();
}

mod first_order {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/first_order.rs"));
}

#[test]
fn first_order_runs() {
    first_order::main();
}

mod lif_neuron {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/lif_neuron.rs"));
}

#[test]
fn lif_neuron_runs() {
    lif_neuron::main();
}

mod model_file {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/model_file.rs"));
}

#[test]
fn model_file_runs() {
    model_file::main();
}

mod oracle_input {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/oracle_input.rs"));
}

#[test]
fn oracle_input_runs() {
    oracle_input::main();
}

mod profile_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/profile_sweep.rs"));
}

#[test]
fn profile_sweep_runs() {
    profile_sweep::main();
}

mod roots_and_divisibility {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/roots_and_divisibility.rs"));
}

#[test]
fn roots_and_divisibility_runs() {
    roots_and_divisibility::main();
}

mod systems {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/systems.rs"));
}

#[test]
fn systems_runs() {
    systems::main();
}

mod trivial_solution {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/trivial_solution.rs"));
}

#[test]
fn trivial_solution_runs() {
    trivial_solution::main();
}
