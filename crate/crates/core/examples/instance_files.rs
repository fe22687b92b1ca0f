//! Parse an instance file, evaluate it in the mode its tokens call for, and
//! write it back in canonical form.

use dcr::factorization::dcr;
use dcr::{InstanceFile, Mode, Poly};
use num::BigRational;

const TEXT: &str = "\
# a 4-cycle with a chord, mixed reliabilities
4 5 2
0 2
0 1 0.9
1 2 3/4
2 3 .5
3 0 1
1 3 1/3
";

fn main() -> dcr::Result<()> {
    let file = InstanceFile::parse(TEXT)?;
    println!("digest {}", file.digest());
    println!("mode {}", file.natural_mode());
    match file.natural_mode() {
        Mode::Poly => println!("R = {}", dcr(&file.to_instance::<Poly>()?)?),
        _ => println!("R = {}", dcr(&file.to_instance::<BigRational>()?)?),
    }
    println!("R ~ {}", dcr(&file.to_instance::<f64>()?)?);
    print!("canonical form:\n{}", file.to_text());

    let symbolic = InstanceFile::parse("3 3 2\n0 2\n0 1 p\n1 2 p^2\n0 2 1-p\n")?;
    println!("symbolic R = {}", dcr(&symbolic.to_instance::<Poly>()?)?);

    match InstanceFile::parse("3 2 2\n0 2\n0 1 p\n1 2 0.4\n") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("mixed symbolic and numeric tokens"),
    }
    Ok(())
}
