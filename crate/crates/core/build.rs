// Link the system OpenBLAS, which bundles BLAS, CBLAS, and LAPACK.
// (Requires libopenblas-dev or equivalent.)
fn main() {
    println!("cargo:rustc-link-lib=dylib=openblas");
}
