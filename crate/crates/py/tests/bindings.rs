//! Drives the bindings through an embedded interpreter.

use pyo3::prelude::*;
use pyo3::types::PyDict;
use proptest::prelude::*;

fn with_module<R>(f: impl FnOnce(Python<'_>, &Bound<'_, PyDict>) -> R) -> R {
    Python::attach(|py| {
        let m = pyo3::wrap_pymodule!(asm_curves::asm_curves)(py);
        let env = PyDict::new(py);
        env.set_item("m", m).unwrap();
        f(py, &env)
    })
}

#[test]
fn curve_and_group_round_trip() {
    with_module(|py, env| {
        py.run(
            c"
c = m.Curve(2, 2)
assert c.q == 4 and c.genus == 9
pts = c.points('Fq2')
assert all(c.on_curve(u, v) for u, v in pts)
g = c.group_elements()
assert len(g) == c.group_report()['order'] == 96
u, v = c.sample_points(1, seed=3)[0]
assert all(c.on_curve(*h.apply(u, v)) for h in g[:10])
assert [len(s) for s in c.infinity_order_sequences()] == [4] * 8
",
            Some(env),
            None,
        )
        .unwrap();
    });
}

#[test]
fn errors_become_value_errors() {
    with_module(|py, env| {
        for code in [c"m.Field(4, 1)", c"m.Curve(3, 1, [0])", c"m.Curve(3).tau(0, 0)", c"m.Field(3, 1).inv(0)"] {
            let e = py.run(code, Some(env), None).unwrap_err();
            assert!(e.is_instance_of::<pyo3::exceptions::PyValueError>(py), "{e}");
        }
    });
}

#[test]
fn run_report_exit_codes() {
    with_module(|py, env| {
        let r = py.eval(c"m.run_report(3, checks='points,genus')", Some(env), None).unwrap();
        let (text, code): (String, i32) = r.extract().unwrap();
        assert_eq!(code, 0);
        assert!(text.contains("determinism_hash"));
        assert!(py.eval(c"m.run_report(3, precision=2)", Some(env), None).is_err());
    });
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn field_arithmetic_is_consistent(a in 1u32..81, b in 1u32..81) {
        with_module(|py, env| {
            env.set_item("a", a).unwrap();
            env.set_item("b", b).unwrap();
            let ok: bool = py
                .eval(
                    c"(lambda f: f.div(f.mul(a, b), b) == a and f.frobenius(f.frobenius(a, 2), 2) == a and f.pow(a, -1) == f.inv(a))(m.Field(3, 1))",
                    Some(env),
                    None,
                )
                .unwrap()
                .extract()
                .unwrap();
            assert!(ok);
        });
    }
}
