use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::PyModule;

#[test]
fn smoke_script_passes_in_embedded_interpreter() {
    Python::initialize();
    Python::attach(|py| -> PyResult<()> {
        let m = PyModule::new(py, "schurwalk")?;
        schurwalk_py::schurwalk_py(&m)?;
        py.import("sys")?.getattr("modules")?.set_item("schurwalk", m)?;
        let code = CString::new(include_str!("../python/smoke_test.py")).unwrap();
        let script = PyModule::from_code(py, &code, c"smoke_test.py", c"smoke_test")?;
        script.getattr("main")?.call0()?;
        Ok(())
    })
    .unwrap();
}
