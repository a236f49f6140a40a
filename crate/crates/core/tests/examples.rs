//! Every runnable example, compiled into the test suite and executed.

macro_rules! example {
    ($name:ident, $file:literal) => {
        mod $name {
            include!($file);

            #[test]
            fn runs() {
                main().unwrap();
            }
        }
    };
}

example!(hamiltonian, "../examples/hamiltonian.rs");
example!(spectrum, "../examples/spectrum.rs");
example!(lyapunov, "../examples/lyapunov.rs");
example!(mobility_ring, "../examples/mobility_ring.rs");
example!(numeric_boundary, "../examples/numeric_boundary.rs");
example!(phase_diagram, "../examples/phase_diagram.rs");
