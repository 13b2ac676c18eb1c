//! Drives the command-line front end in-process from a JSON configuration.
//!
//! `cargo run --release --example run_config`

use stable_extremum::cli;

fn main() {
    let config = r#"{
        "alpha": 0.2, "beta": -0.2, "scale": 0.2, "mu": 0.0, "convention": "sigma",
        "T": 10.0, "points": [0.5, 1.0, 3.0], "eps": 1e-10
    }"#;
    let path = std::env::temp_dir().join("stable_extremum_run_config.json");
    std::fs::write(&path, config).expect("write config");
    let args = ["stable-extremum", "--config", path.to_str().unwrap(), "--no-timing", "cpdf-sup"];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(args, &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    println!("exit code {code}");
}
