// Writes the figure datasets and their manifest through the command-line
// entry point.

use std::path::{Path, PathBuf};

fn run_example(dir: &Path) -> tomobell::Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = [
        "tomobell",
        "figures",
        "--out-dir",
        dir.to_str().expect("utf-8 path"),
        "--points",
        "73",
    ];
    let code = tomobell::cli::run_with(args, &mut out, &mut err);
    print!("{}", String::from_utf8_lossy(&out));
    eprint!("{}", String::from_utf8_lossy(&err));
    if code != 0 {
        return Err(tomobell::Error::Config(format!(
            "figures exited with {code}"
        )));
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    files.sort();
    Ok(files)
}

fn main() -> tomobell::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "figures".into());
    for f in run_example(Path::new(&dir))? {
        println!("{}", f.display());
    }
    Ok(())
}
