#!/usr/bin/env python3
"""
mimorelay setup: virtual environment, dependencies, .env and output folders
"""

import argparse
import os
import subprocess
import sys
from pathlib import Path
from typing import Dict, List, Optional

# Names read by mimorelay.core.settings
LOG_LEVEL_ENV = "MIMORELAY_LOG_LEVEL"
PARALLELISM_ENV = "MIMORELAY_PARALLELISM"

OUTPUT_DIRECTORIES = ("results", "dumps")


def venv_executable(root: Path, name: str) -> Path:
    scripts = "Scripts" if os.name == 'nt' else "bin"
    return root / "venv" / scripts / name


def default_env(cpu_count: Optional[int] = None) -> Dict[str, str]:
    """Environment defaults: INFO logging and one sweep worker per core, leaving one free."""
    cores = cpu_count if cpu_count is not None else (os.cpu_count() or 2)
    return {LOG_LEVEL_ENV: "INFO", PARALLELISM_ENV: str(max(1, cores - 1))}


def write_env_file(root: Path, values: Dict[str, str]) -> bool:
    """Create root/.env; an existing file is left alone. Returns True when written."""
    path = root / ".env"
    if path.exists():
        print(f"✓ {path.name} already exists, keeping it")
        return False
    lines = ["# mimorelay environment overrides"] + [f"{key}={value}" for key, value in values.items()]
    path.write_text("\n".join(lines) + "\n")
    print(f"✓ {path.name} written ({', '.join(values)})")
    return True


def prepare_directories(root: Path) -> List[Path]:
    created = []
    for name in OUTPUT_DIRECTORIES:
        directory = root / name
        directory.mkdir(exist_ok=True)
        created.append(directory)
    print(f"✓ output folders ready: {', '.join(OUTPUT_DIRECTORIES)}")
    return created


def install(root: Path) -> Path:
    """Create venv/ if needed and install requirements.txt into it. Returns the venv python."""
    python = venv_executable(root, "python")
    if not python.exists():
        subprocess.run([sys.executable, "-m", "venv", str(root / "venv")], check=True)
        print("✓ virtual environment created")
    subprocess.run([str(python), "-m", "pip", "install", "-r", str(root / "requirements.txt")], check=True)
    print("✓ dependencies installed")
    return python


def check_installation(root: Path, python: Path) -> bool:
    result = subprocess.run([str(python), "test_installation.py"], cwd=root,
                            capture_output=True, text=True)
    if result.returncode != 0:
        print("❌ installation check failed")
        print(result.stdout)
        print(result.stderr)
        return False
    print("✓ installation check passed")
    return True


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Set up mimorelay for first use")
    parser.add_argument("--root", default=str(Path(__file__).resolve().parent),
                        help="Project directory (default: the folder holding this script)")
    parser.add_argument("--skip-install", action="store_true",
                        help="Use the current interpreter instead of creating venv/")
    parser.add_argument("--skip-check", action="store_true", help="Do not run test_installation.py")
    args = parser.parse_args(argv)
    root = Path(args.root)

    if sys.version_info < (3, 9):
        print("❌ Python 3.9 or higher is required")
        return 1

    try:
        python = Path(sys.executable) if args.skip_install else install(root)
    except subprocess.CalledProcessError as e:
        print(f"❌ installation failed: {e}")
        return 1

    write_env_file(root, default_env())
    prepare_directories(root)

    if not args.skip_check and not check_installation(root, python):
        return 1

    print("\nNext steps:")
    if not args.skip_install:
        activate = r".\venv\Scripts\activate" if os.name == 'nt' else "source venv/bin/activate"
        print(f"   {activate}")
    print("   python main.py asymptote --config configs/flat.json")
    print("   python main.py sweep --config configs/impaired.json --n-values 64,256 --trials 20")
    return 0


if __name__ == '__main__':
    sys.exit(main())
