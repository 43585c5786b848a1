//! Draws one instance of every random problem family, writes it to a temp
//! directory and reads it back.

use noisy_combopt::harness::{generate_instance, ProblemFamily};
use noisy_combopt::problems::{read_instance, write_instance};

fn main() -> noisy_combopt::Result<()> {
    let dir = std::env::temp_dir().join("noisy-combopt-instances");
    std::fs::create_dir_all(&dir).expect("temp dir");
    for family in ProblemFamily::ALL {
        let m = family.uses_m().then_some(if family == ProblemFamily::Cocz {
            10
        } else {
            40
        });
        let Some(file) = generate_instance(family, 20, m, 0.001, 7)? else {
            println!("{family}: no random instance");
            continue;
        };
        let path = dir.join(format!("{family}.txt"));
        write_instance(&file, &path)?;
        assert_eq!(read_instance(&path)?, file);
        println!(
            "{family}: {} (n={}, m={:?})",
            path.display(),
            file.instance.n(),
            file.instance.m()
        );
    }
    Ok(())
}
