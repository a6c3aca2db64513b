//! Generate a small synthetic disguised-face dataset and write it to disk.
//!
//! ```text
//! cargo run -p dfr --example synth_dataset -- /tmp/dfr-synth
//! ```

use std::path::PathBuf;

use dfr::data::{generate_dataset, save_dataset, Manifest};

fn main() -> dfr::Result<()> {
    let out: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "dfr-synth".into()).into();
    std::fs::create_dir_all(&out).map_err(|e| dfr::Error::Io { path: out.clone(), source: e })?;

    let (subjects, per_subject, seed, size) = (4, 10, 7, 96);
    let samples = generate_dataset(subjects, per_subject, seed, size)?;
    let manifest = Manifest {
        seed,
        subjects,
        per_subject,
        size,
        samples: samples.len(),
    };
    save_dataset(&out, &samples, Some(&manifest))?;

    for s in samples.iter().take(10) {
        let hidden = s.annotation.keypoints.visible.iter().filter(|v| !**v).count();
        println!(
            "{}  subject {}  disguise {:<18} viewpoint {:>5.1}  hidden keypoints {}",
            s.annotation.image,
            s.subject_id(),
            s.disguise().map_or("none", |d| d.name()),
            s.annotation.viewpoint,
            hidden
        );
    }
    println!("wrote {} samples to {}", samples.len(), out.display());
    Ok(())
}
