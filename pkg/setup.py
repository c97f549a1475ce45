from setuptools import setup

setup(
    name="mdsconv",
    version="0.1.0",
    packages=["libs", "services", "data_classes"],
    py_modules=["cli", "main"],
    package_data={"libs": ["tables.txt"]},
    install_requires=[
        "flask",
        "flask-cors",
        "python-dotenv",
        "numpy",
    ],
    entry_points={
        "console_scripts": [
            "mdsconv=cli:main",
        ],
    },
    python_requires=">=3.8",
)
