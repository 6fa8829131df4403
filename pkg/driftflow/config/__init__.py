from pathlib import Path

# default root for run outputs (csv + json)
OUTPUT_DIR = Path.cwd() / 'runs'
# upper bound of concurrently running sweep tasks
MAX_WORKERS = 8
# 17 significant digits keep csv output byte-reproducible
CSV_FLOAT_FORMAT = '%.17g'
JSON_INDENT = 2
