from pathlib import Path

sample_programs_path = Path(__file__).parent
