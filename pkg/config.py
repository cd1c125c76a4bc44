import os
from dotenv import load_dotenv

load_dotenv()

# === WORKERS ===
# Batas jumlah worker process untuk Monte Carlo & sweep (0 = auto, pakai semua CPU)
STUBBORN_LAB_THREADS = int(os.getenv("STUBBORN_LAB_THREADS", "0"))

# === LOGGING ===
# Level log ke stderr: DEBUG / INFO / WARNING / ERROR
STUBBORN_LAB_LOG_LEVEL = os.getenv("STUBBORN_LAB_LOG_LEVEL", "WARNING")

# Diagnostik per-batch (0/1)
STUBBORN_LAB_DEBUG = os.getenv("STUBBORN_LAB_DEBUG", "0") == "1"

# === DEFAULT CLI ===
DEFAULT_SEED = int(os.getenv("DEFAULT_SEED", "42"))

# Jumlah attack cycle default untuk simulate / validate
DEFAULT_CYCLES = int(os.getenv("DEFAULT_CYCLES", "1000000"))

# Jumlah cycle SM per cell saat membuat peta (q, gamma)
DEFAULT_SM_CYCLES = int(os.getenv("DEFAULT_SM_CYCLES", "100000"))
