# Configuration and report persistence shared by the library and the CLI
