// SPDX-License-Identifier: Apache-2.0

//! Runs `python/smoke_test.py` in an embedded interpreter with the module
//! registered as a builtin, so no install step is needed.

use std::ffi::CString;

use noncongruent_py::noncongruent_py;
use pyo3::prelude::*;
use pyo3::types::PyDict;

#[test]
fn smoke_script_passes() {
    pyo3::append_to_inittab!(noncongruent_py);
    Python::initialize();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/python/smoke_test.py");
    let code = CString::new(std::fs::read_to_string(path).unwrap()).unwrap();
    Python::attach(|py| {
        let module = py.import("noncongruent_py").unwrap();
        assert!(
            module.getattr("__file__").is_err(),
            "picked up an installed copy instead of the builtin"
        );
        let globals = PyDict::new(py);
        globals.set_item("__name__", "__main__").unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.display(py);
            panic!("smoke test failed: {e}");
        }
    });
}
