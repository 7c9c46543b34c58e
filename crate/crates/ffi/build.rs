use std::env;
use std::fs;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("set by cargo"));
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let config = cbindgen::Config::from_file(crate_dir.join("cbindgen.toml"))
        .expect("readable cbindgen.toml");
    let header = crate_dir.join("include").join("gms.h");
    match cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
    {
        Ok(bindings) => {
            let mut text = Vec::new();
            bindings.write(&mut text);
            // rewrite only on change so the checked-in header keeps its mtime
            if fs::read(&header).ok().as_deref() != Some(text.as_slice()) {
                fs::write(&header, text).expect("writable include/gms.h");
            }
        }
        Err(e) => println!("cargo:warning=header not regenerated: {e}"),
    }
}
