use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("cargo sets this"));

    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        cpp_compat: true,
        include_guard: Some("HYPERSD_H".to_owned()),
        header: Some("/* C interface for the hypersd library. */".to_owned()),
        enumeration: cbindgen::EnumConfig {
            rename_variants: cbindgen::RenameRule::ScreamingSnakeCase,
            prefix_with_name: true,
            ..Default::default()
        },
        documentation_style: cbindgen::DocumentationStyle::C99,
        ..Default::default()
    };

    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("the header generates from src/lib.rs")
        .write_to_file(crate_dir.join("include").join("hypersd.h"));

    println!("cargo:rerun-if-changed=src/lib.rs");
}
