#!/usr/bin/env python3
"""
mimorelay Installation Test
Quick check that mimorelay and its dependencies are installed and working
"""

import sys
import asyncio
from pathlib import Path


def check_imports():
    """Check that all modules can be imported"""
    print("Checking imports...")

    modules = [
        ('mimorelay.core.config', 'SystemConfig'),
        ('mimorelay.core.settings', 'Settings'),
        ('mimorelay.core.channel', 'sample_channels'),
        ('mimorelay.core.beamform', 'build_mrc_mrt'),
        ('mimorelay.core.finite_rate', 'rates'),
        ('mimorelay.core.asymptotic', 'asymptotic_rate'),
        ('mimorelay.core.concentration', 'run_lemma_suite'),
        ('mimorelay.core.agent', 'SimulationAgent'),
        ('mimorelay.core.reporter', 'SweepReporter'),
        ('mimorelay.export.array_dump', 'dump_channels'),
    ]

    for module_name, attribute in modules:
        try:
            module = __import__(module_name, fromlist=[attribute])
            getattr(module, attribute)
            print(f"✓ {attribute} imported successfully")
        except (ImportError, AttributeError) as e:
            print(f"✗ Failed to import {attribute}: {e}")
            return False

    return True


def check_settings():
    """Check runtime settings loading"""
    print("\nChecking settings...")

    try:
        from mimorelay.core.settings import Settings

        if not Path('settings.yaml').exists():
            print("✗ settings.yaml not found")
            return False

        settings = Settings.from_yaml('settings.yaml')
        print(f"✓ Settings loaded (trials={settings.default_trials}, parallelism={settings.parallelism})")
        return True

    except Exception as e:
        print(f"✗ Settings check failed: {e}")
        return False


def check_limits():
    """Check the closed-form limit on the shipped flat configuration"""
    print("\nChecking asymptotic limits...")

    try:
        import math
        from mimorelay.core.asymptotic import asymptotic_rate
        from mimorelay.core.config import load_config

        limits = asymptotic_rate(load_config('configs/flat.json'))
        value = float(limits.rate_limit[0, 0])
        if abs(value - math.log2(51)) < 1e-12:
            print(f"✓ Flat configuration limit: {value:.4f} bits/s/Hz")
            return True
        print(f"✗ Unexpected limit {value}")
        return False

    except Exception as e:
        print(f"✗ Limit check failed: {e}")
        return False


async def check_small_sweep():
    """Run a tiny sweep in-process"""
    print("\nChecking a small sweep...")

    try:
        from mimorelay.core.agent import SimulationAgent
        from mimorelay.core.config import load_config
        from mimorelay.core.settings import Settings

        agent = SimulationAgent(Settings(parallelism=1))
        result = await agent.run_sweep(load_config('configs/impaired.json'), [8, 16], trials=2, seed=0)
        print(f"✓ Sweep finished, mean rate at N=16: {result.mean_rate[0, 0, -1]:.3f}")
        return True

    except Exception as e:
        print(f"✗ Sweep check failed: {e}")
        return False


def check_dependencies():
    """Check if required dependencies are installed"""
    print("\nChecking dependencies...")

    # Map package names to their import names
    required_packages = {
        'numpy': 'numpy',
        'scipy': 'scipy',
        'pydantic': 'pydantic',
        'pyyaml': 'yaml',
        'python-dotenv': 'dotenv',
        'dataclasses-json': 'dataclasses_json',
        'jinja2': 'jinja2',
        'pytest': 'pytest',
        'pytest-asyncio': 'pytest_asyncio',
    }

    missing_packages = []

    for package_name, import_name in required_packages.items():
        try:
            __import__(import_name)
            print(f"✓ {package_name}")
        except ImportError:
            print(f"✗ {package_name} (missing)")
            missing_packages.append(package_name)

    if missing_packages:
        print(f"\nMissing packages: {', '.join(missing_packages)}")
        print("Install them with: pip install -r requirements.txt")
        return False

    return True


def main():
    """Run all checks"""
    print("mimorelay Installation Test")
    print("=" * 50)

    all_passed = True

    if not check_dependencies():
        print("\n⚠️  Some dependencies are missing. Install them before proceeding.")
        all_passed = False

    if not check_imports():
        all_passed = False

    if not check_settings():
        all_passed = False

    if not check_limits():
        all_passed = False

    if not asyncio.run(check_small_sweep()):
        all_passed = False

    print("\n" + "=" * 50)
    if all_passed:
        print("🎉 All checks passed! mimorelay is ready to use.")
        print("\nNext steps:")
        print("1. Run examples: python examples.py")
        print("2. Run the test suite: pytest (add --runslow for the Monte Carlo acceptance runs)")
        print("3. Use CLI: python main.py --help")
    else:
        print("❌ Some checks failed. Please fix the issues before using mimorelay.")
        sys.exit(1)


if __name__ == '__main__':
    main()
