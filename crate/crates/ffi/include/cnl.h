#ifndef CNL_H
#define CNL_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CnlStatus {
  CNL_STATUS_OK = 0,
  /*
   The sentence contradicts the knowledge base.
   */
  CNL_STATUS_REJECTED = 1,
  /*
   Several readings; pick one with `cnl_session_choose`.
   */
  CNL_STATUS_AMBIGUOUS = 2,
  CNL_STATUS_NULL_ARGUMENT = 3,
  CNL_STATUS_INVALID_UTF8 = 4,
  CNL_STATUS_PARSE = 5,
  /*
   Anaphora, translation or unknown names.
   */
  CNL_STATUS_LANGUAGE = 6,
  CNL_STATUS_INFERENCE = 7,
  CNL_STATUS_IO = 8,
  CNL_STATUS_FORMAT = 9,
  CNL_STATUS_EXECUTION = 10,
  CNL_STATUS_USAGE = 11,
  CNL_STATUS_PANIC = 12,
} CnlStatus;

/*
 Opaque dialog state.
 */
typedef struct CnlSession CnlSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version, a static string.
 */
const char *cnl_version(void);

/*
 Message of the last failed call on this thread, or NULL. Valid until the next call.
 */
const char *cnl_last_error_message(void);

/*
 A new session. `lexicon_path` may be NULL for the bundled ATM lexicon.

 # Safety
 `lexicon_path` is NULL or a nul-terminated string; `out` is writable.
 */
enum CnlStatus cnl_session_new(const char *lexicon_path, struct CnlSession **out);

/*
 # Safety
 `s` is NULL or came from `cnl_session_new` and is not used afterwards.
 */
void cnl_session_free(struct CnlSession *s);

/*
 Processes statements and questions; `out_text` receives one line per sentence.

 # Safety
 `s` is a live session, `text` a nul-terminated string, `out_text` writable.
 */
enum CnlStatus cnl_session_process(struct CnlSession *s, const char *text, char **out_text);

/*
 Picks reading `n` (from 1) of the pending ambiguous sentence.

 # Safety
 As for `cnl_session_process`.
 */
enum CnlStatus cnl_session_choose(struct CnlSession *s, uintptr_t n, char **out_text);

/*
 The knowledge base in its file format.

 # Safety
 `s` is a live session and `out_text` writable.
 */
enum CnlStatus cnl_session_kb_text(struct CnlSession *s, char **out_text);

/*
 The knowledge base paraphrased in English, one sentence per line.

 # Safety
 `s` is a live session and `out_text` writable.
 */
enum CnlStatus cnl_session_paraphrase(struct CnlSession *s, char **out_text);

/*
 # Safety
 `s` is a live session and `path` a nul-terminated string.
 */
enum CnlStatus cnl_session_save_kb(struct CnlSession *s, const char *path);

/*
 Replaces the knowledge base with the file's.

 # Safety
 `s` is a live session and `path` a nul-terminated string.
 */
enum CnlStatus cnl_session_load_kb(struct CnlSession *s, const char *path);

/*
 Adds a lexicon entry in the lexicon file syntax.

 # Safety
 `s` is a live session and `entry` a nul-terminated string.
 */
enum CnlStatus cnl_session_add_word(struct CnlSession *s, const char *entry);

/*
 Asks `prompt` whenever `pred`/`arity` is executed in a scenario.

 # Safety
 `s` is a live session; `pred` and `prompt` are nul-terminated strings.
 */
enum CnlStatus cnl_session_register_prompt(struct CnlSession *s,
                                           const char *pred,
                                           uintptr_t arity,
                                           const char *prompt);

/*
 Defines scenario `name`, one sentence per line of `sentences`.

 # Safety
 `s` is a live session; `name` and `sentences` are nul-terminated strings.
 */
enum CnlStatus cnl_session_define_scenario(struct CnlSession *s,
                                           const char *name,
                                           const char *sentences);

/*
 Runs a scenario answering questions from `replies`, one per line (may be NULL).
 `out_text` receives the trace, questions and replies included.

 # Safety
 `s` is a live session; strings are nul-terminated; `out_text` writable.
 */
enum CnlStatus cnl_session_run_scenario(struct CnlSession *s,
                                        const char *name,
                                        const char *replies,
                                        bool keep,
                                        char **out_text);

/*
 # Safety
 `p` is NULL or a string returned by this library, freed once.
 */
void cnl_string_free(char *p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CNL_H */
