// Load an `.ode` model file and run the command line against it.

use odeblowup::specfile::{parse_spec, Model};

const MODEL: &str = "\
# y'' + y = cos(2t), y(0) = 1, y'(0) = 0
[ode]
a = 1, 0, 1
b = 1
y0 = 1, 0

[signal]
expr = cos(2*t)
";

pub fn main() {
    match parse_spec(MODEL).unwrap() {
        Model::Scalar { ode, .. } => println!("loaded order {:?}, P_y = {}", ode.order(), ode.char_polys().0),
        other => println!("loaded {}", other.kind()),
    }
    let dir = std::env::temp_dir().join(format!("odeblowup-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("forced.ode");
    std::fs::write(&path, MODEL).unwrap();
    for args in [vec!["analyze"], vec!["solve", "--t", "3/4", "--bits", "24"], vec!["reduce"]] {
        let mut argv = vec!["odeblowup".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        argv.extend(["--input".to_string(), path.display().to_string()]);
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = odeblowup::cli::run(argv, &mut out, &mut err);
        print!("$ odeblowup {} -> exit {code}\n{}", args.join(" "), String::from_utf8_lossy(&out));
    }
    std::fs::remove_dir_all(dir).unwrap();
}
