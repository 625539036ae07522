#include <stdio.h>
#include <string.h>

#include "setmc.h"

static const char *MODEL =
    "model counter;\n"
    "byte x = 0;\n"
    "input byte y = 0..255;\n"
    "process main {\n"
    "    state s0, s1, loop;\n"
    "    init s0;\n"
    "    trans\n"
    "        s0 -> s1 { effect x = 1; },\n"
    "        s1 -> loop {},\n"
    "        loop -> loop { effect y = y + 1; };\n"
    "}\n"
    "#property spec { ap one = x == 1; ltl X F !one; }\n";

int main(void) {
    SetmcModel *model = NULL;
    if (setmc_model_parse(MODEL, &model) != SETMC_STATUS_OK) {
        fprintf(stderr, "parse: %s\n", setmc_last_error());
        return 1;
    }
    SetmcOptions opts = setmc_default_options();
    SetmcVerdict *verdict = NULL;
    opts.mode = SETMC_MODE_SYM;
    SetmcStatus st = setmc_check(model, NULL, NULL, &opts, &verdict);
    if (st != SETMC_STATUS_OK) {
        fprintf(stderr, "check: %s\n", setmc_last_error());
        return 1;
    }
    char *trace = setmc_verdict_trace_text(verdict);
    printf("holds=%d states=%llu trace=%s\n", (int)setmc_verdict_holds(verdict),
           (unsigned long long)setmc_verdict_states(verdict), trace ? "yes" : "no");
    setmc_string_free(trace);
    setmc_verdict_free(verdict);
    setmc_model_free(model);

    st = setmc_model_parse("model broken", &model);
    printf("broken=%d null=%d\n", (int)st, model == NULL);
    setmc_model_free(model);
    return 0;
}
