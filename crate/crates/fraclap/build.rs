fn main() {
    // Dense symmetric eigensolves and Cholesky factorizations go through the
    // system LAPACK shipped inside OpenBLAS.
    println!("cargo:rustc-link-lib=dylib=openblas");
}
