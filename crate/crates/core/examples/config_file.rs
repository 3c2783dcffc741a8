//! Parses a configuration file and prints the fully resolved configuration.
//!
//!     cargo run --example config_file -- my.cfg
fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable config"),
        None => "case = test4\nmesh = disk 1 4\nomega = 2\n".to_string(),
    };
    match nsk_dg::cli::parse_config_with_out(&text) {
        Ok((c, out)) => {
            print!("{}", c.to_text());
            if let Some(out) = out {
                println!("out = {out}");
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(1);
        }
    }
}
