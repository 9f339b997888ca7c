use std::env;
use std::path::Path;

// netlib-src's `system` mode links plain `-lblas -llapack -lcblas`. The
// reference BLAS that satisfies those names here is far too slow for the
// dense diagonalization paths, and no standalone libcblas exists at all.
// Redirect all three names to OpenBLAS via symlinks in OUT_DIR; the
// recorded SONAME (libopenblas.so.0) keeps runtime resolution correct.
fn main() {
    let openblas = "/usr/lib/x86_64-linux-gnu/libopenblas.so";
    if !Path::new(openblas).exists() {
        return; // fall back to whatever the system resolves
    }
    let out = env::var("OUT_DIR").unwrap();
    for name in ["libblas.so", "liblapack.so", "libcblas.so"] {
        let shim = Path::new(&out).join(name);
        if !shim.exists() {
            std::os::unix::fs::symlink(openblas, &shim).unwrap();
        }
    }
    println!("cargo:rustc-link-search=native={out}");
}
