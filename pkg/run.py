import uvicorn
from dotenv import load_dotenv

from app.utils.config import get_settings

# Load environment variables
load_dotenv()

if __name__ == "__main__":
    # Port comes from PORT in the environment, default 8000
    port = get_settings().port

    # Run the FastAPI application
    uvicorn.run("app.main:app", host="0.0.0.0", port=port, reload=True)
